"""Test package for vertexlab"""
