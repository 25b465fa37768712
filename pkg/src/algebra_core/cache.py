"""On-disk cache of reduced Gröbner bases, keyed by a content hash.

A stored basis is handed out only after it passes validation against the
requesting generators: each generator reduces to zero and every S-vector of
the stored basis reduces to zero.
"""

import hashlib
import json
import os
import tempfile
import threading
from typing import Callable, List, Optional, Sequence

from algebra_core.groebner import GroebnerBasis, is_groebner
from algebra_core.orders import ModuleOrder
from algebra_core.scalars import field_name, format_scalar, make_scalar
from algebra_core.vectors import Vec
from config.config import log_message


def _encode_vec(field, vec: Vec) -> list:
    return sorted([comp, list(exps), format_scalar(field, coeff)] for (comp, exps), coeff in vec.items())


def _decode_scalar(field, text: str):
    if "/" in text:
        num, den = text.split("/", 1)
        return make_scalar(field, int(num), int(den))
    return make_scalar(field, int(text))


class GroebnerCache:
    """Directory-backed store of reduced bases.

    Args:
        directory: where ``<sha256>.json`` files live; created on demand.
        field: coefficient field of every basis stored here.
        log_function: optional callback for cache events.
    """

    def __init__(self, directory: str, field, log_function: Optional[Callable[[str], None]] = None):
        self.directory = directory
        self.field = field
        self.log = log_function or log_message
        self._lock = threading.Lock()
        os.makedirs(directory, exist_ok=True)

    def key(self, gens: Sequence[Vec], order: ModuleOrder, rank: int, nvars: int) -> str:
        payload = {
            "field": field_name(self.field),
            "order": repr(order.signature),
            "rank": rank,
            "nvars": nvars,
            "gens": [_encode_vec(self.field, g) for g in gens],
        }
        text = json.dumps(payload, sort_keys=True)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def _compatible(self, gens: Sequence[Vec]) -> bool:
        return all(self.field.of_type(c) for g in gens for c in g.values())

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, f"{key}.json")

    def load(self, gens: Sequence[Vec], order: ModuleOrder, rank: int, nvars: int) -> Optional[GroebnerBasis]:
        if not self._compatible(gens):
            return None
        path = self._path(self.key(gens, order, rank, nvars))
        if not os.path.exists(path):
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
            elements: List[Vec] = []
            for encoded in data["basis"]:
                elements.append({(comp, tuple(exps)): _decode_scalar(self.field, coeff) for comp, exps, coeff in encoded})
        except (OSError, ValueError, KeyError, TypeError) as e:
            self.log(f"[CACHE] Ignoring unreadable entry {path}: {e}")
            return None
        basis = GroebnerBasis(elements, order, rank, nvars)
        if not all(basis.contains(g) for g in gens) or not is_groebner(elements, order):
            self.log(f"[CACHE] Entry {path} failed validation, recomputing")
            return None
        return basis

    def store(self, gens: Sequence[Vec], basis: GroebnerBasis) -> None:
        if not self._compatible(gens):
            return
        key = self.key(gens, basis.order, basis.rank, basis.nvars)
        payload = {"basis": [_encode_vec(self.field, g) for g in basis.elements]}
        with self._lock:
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as f:
                    json.dump(payload, f, sort_keys=True)
                os.replace(tmp, self._path(key))
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
