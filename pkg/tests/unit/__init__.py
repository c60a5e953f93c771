"""Unit tests for vertexlab"""
