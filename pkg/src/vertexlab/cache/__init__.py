import hashlib
import json
import logging
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from pydantic import ValidationError

from ..arith import format_rational, parse_rational
from ..classical import QPoly
from ..corrections import Decoupling, RelationResult
from ..database import init_db
from ..models import CacheEntry
from ..models.schemas import DecouplingDocument, RelationDocument, TermModel
from ..parser import ParseError, terms_to_poly
from ..wbasis import WPoly

logger = logging.getLogger(__name__)

RELATION = "relation"
DECOUPLING = "decoupling"


def _terms(p: WPoly):
    return [TermModel(word=p.format_word(word), coefficient=format_rational(c)) for word, c in p]


def relation_document(result: RelationResult) -> RelationDocument:
    return RelationDocument(
        family=result.family,
        n=result.n,
        indices=[list(i) for i in result.indices],
        weight=result.weight,
        strategy=result.strategy,
        by_degree={str(d): _terms(p) for d, p in sorted(result.by_degree.items())},
        remainder=format_rational(result.remainder) if result.remainder is not None else None,
        kernel_ok=result.kernel_ok,
        passes=result.passes,
    )


def relation_from_document(doc: RelationDocument) -> RelationResult:
    relation = WPoly.zero()
    for terms in doc.by_degree.values():
        relation = relation + terms_to_poly(WPoly, terms)
    return RelationResult(
        family=doc.family,
        n=doc.n,
        indices=tuple(tuple(i) for i in doc.indices),
        weight=doc.weight,
        relation=relation,
        remainder=parse_rational(doc.remainder) if doc.remainder is not None else None,
        kernel_ok=doc.kernel_ok,
        passes=doc.passes,
        strategy=doc.strategy,
    )


def decoupling_document(decoupling: Decoupling) -> DecouplingDocument:
    return DecouplingDocument(
        family=decoupling.family,
        n=decoupling.n,
        m=decoupling.m,
        expression=_terms(decoupling.expression),
    )


def decoupling_from_document(doc: DecouplingDocument) -> Decoupling:
    return Decoupling(family=doc.family, n=doc.n, m=doc.m, expression=terms_to_poly(WPoly, doc.expression))


class RelationCache:
    """
    Stores relations and decouplings in the SQLite file under a cache directory.

    Rows that fail to decode are logged and treated as misses.
    """

    def __init__(self, cache_dir: str):
        self.cache_dir = cache_dir
        self.session_factory = init_db(cache_dir)

    def generate_cache_key(self, kind: str, payload: Dict[str, Any]) -> str:
        """
        SHA-256 key over the sorted JSON of the entry's identifying data.

        Args:
            kind: ``relation`` or ``decoupling``
            payload: Identifying fields (family, n, and the classical input or index m)
        """
        cache_data = {"kind": kind, "payload": payload}
        sorted_data = json.dumps(cache_data, sort_keys=True)
        return hashlib.sha256(sorted_data.encode()).hexdigest()

    def _relation_key(self, family: str, n: int, classical: QPoly, strategy: str) -> str:
        return self.generate_cache_key(RELATION, {
            "family": family, "n": n, "classical": classical.format(), "strategy": strategy,
        })

    def _decoupling_key(self, family: str, n: int, m: int) -> str:
        return self.generate_cache_key(DECOUPLING, {"family": family, "n": n, "m": m})

    def _load(self, kind: str, cache_key: str) -> Optional[str]:
        db = self.session_factory()
        try:
            entry = db.query(CacheEntry).filter(
                CacheEntry.kind == kind,
                CacheEntry.cache_key == cache_key,
            ).first()
            return entry.document if entry else None
        finally:
            db.close()

    def _store(self, kind: str, cache_key: str, family: str, n: int, weight: int, document: str) -> bool:
        db = self.session_factory()
        try:
            existing = db.query(CacheEntry).filter(
                CacheEntry.kind == kind,
                CacheEntry.cache_key == cache_key,
            ).first()
            if existing:
                existing.document = document
                existing.created_at = datetime.now(timezone.utc)
            else:
                db.add(CacheEntry(
                    kind=kind,
                    cache_key=cache_key,
                    family=family,
                    n=n,
                    weight=weight,
                    document=document,
                ))
            db.commit()
            return True
        except Exception as e:
            db.rollback()
            logger.error("Error storing cache entry: %s", e)
            return False
        finally:
            db.close()

    def get_relation(self, family: str, n: int, classical: QPoly, strategy: str = "canonical") -> Optional[RelationResult]:
        document = self._load(RELATION, self._relation_key(family, n, classical, strategy))
        if document is None:
            return None
        try:
            return relation_from_document(RelationDocument.model_validate_json(document))
        except (ValidationError, ParseError, ValueError) as e:
            logger.warning("Ignoring corrupt relation entry for %s(%d): %s", family, n, e)
            return None

    def store_relation(self, result: RelationResult, classical: QPoly) -> bool:
        key = self._relation_key(result.family, result.n, classical, result.strategy)
        document = relation_document(result).model_dump_json()
        return self._store(RELATION, key, result.family, result.n, result.weight, document)

    def get_decoupling(self, family: str, n: int, m: int) -> Optional[Decoupling]:
        document = self._load(DECOUPLING, self._decoupling_key(family, n, m))
        if document is None:
            return None
        try:
            return decoupling_from_document(DecouplingDocument.model_validate_json(document))
        except (ValidationError, ParseError, ValueError) as e:
            logger.warning("Ignoring corrupt decoupling entry for %s(%d) W^%d: %s", family, n, m, e)
            return None

    def store_decoupling(self, decoupling: Decoupling) -> bool:
        key = self._decoupling_key(decoupling.family, decoupling.n, decoupling.m)
        document = decoupling_document(decoupling).model_dump_json()
        return self._store(DECOUPLING, key, decoupling.family, decoupling.n, decoupling.m + 1, document)

    def invalidate(self, family: Optional[str] = None) -> int:
        """
        Remove cached entries, all of them or those of one family.

        Returns:
            Number of entries removed
        """
        db = self.session_factory()
        try:
            query = db.query(CacheEntry)
            if family is not None:
                query = query.filter(CacheEntry.family == family)
            deleted_count = query.delete()
            db.commit()
            return deleted_count
        except Exception as e:
            db.rollback()
            logger.error("Error invalidating cache: %s", e)
            return 0
        finally:
            db.close()

    def get_cache_stats(self) -> Dict[str, Any]:
        db = self.session_factory()
        try:
            total_entries = db.query(CacheEntry).count()
            relations = db.query(CacheEntry).filter(CacheEntry.kind == RELATION).count()
            newest = db.query(CacheEntry).order_by(CacheEntry.created_at.desc()).first()
            return {
                "total_entries": total_entries,
                "relations": relations,
                "decouplings": total_entries - relations,
                "newest_entry": newest.created_at.isoformat() if newest else None,
            }
        finally:
            db.close()
