"""Marked-set descriptions and their JSON wire format.

An oracle here is nothing but the set of marked indices inside a register
of ``n_total`` basis states; the engines turn it into a conditional phase.
Two JSON layouts are accepted: an explicit one listing the marked indices
and a compact one that names a placement rule instead.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CountError, ParseError, RangeError

PLACEMENTS = ("first", "last", "random")

_EXPLICIT_KEYS = {"n", "marked", "name"}
_COMPACT_KEYS = {"n", "t", "placement", "seed", "name"}


class OracleNormalizationWarning(UserWarning):
    """Marked indices were reordered or deduplicated during parsing."""


def _check_int(value, what: str):
    # bool is an int subclass; reject it explicitly
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{what} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class OracleSpec:
    """Immutable marked-set description.

    ``marked`` must be a strictly increasing tuple of indices in
    ``[0, n_total)``. Use :func:`parse_oracle` or :func:`generate_oracle`
    to build one from unnormalized input.
    """

    n_total: int
    marked: tuple[int, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if isinstance(self.n_total, bool) or not isinstance(self.n_total, int):
            raise CountError(f"register size must be an integer, got {self.n_total!r}")
        if self.n_total < 1:
            raise CountError(f"register size must be positive, got {self.n_total}")
        object.__setattr__(self, "marked", tuple(self.marked))
        prev = -1
        for idx in self.marked:
            if isinstance(idx, bool) or not isinstance(idx, int):
                raise RangeError(f"marked index must be an integer, got {idx!r}")
            if not 0 <= idx < self.n_total:
                raise RangeError(
                    f"marked index {idx} outside [0, {self.n_total})"
                )
            if idx <= prev:
                raise ValueError("marked indices must be strictly increasing")
            prev = idx

    @property
    def t(self) -> int:
        """Number of marked states."""
        return len(self.marked)

    @cached_property
    def marked_array(self) -> np.ndarray:
        """Marked indices as an immutable intp array (shared, do not write)."""
        arr = np.asarray(self.marked, dtype=np.intp)
        arr.setflags(write=False)
        return arr


def parse_oracle(text: str | bytes) -> OracleSpec:
    """Parse a JSON oracle document.

    Explicit form: ``{"n": int, "marked": [int, ...]}``. Compact form:
    ``{"n": int, "t": int, "placement": "first"|"last"|"random"}`` with an
    optional ``"seed"`` (default 0). Both accept an optional ``"name"``.
    Any other field is rejected. Marked indices are sorted and deduplicated
    with an :class:`OracleNormalizationWarning`.

    Raises:
        ParseError: malformed JSON, wrong shape, or unknown fields.
        CountError: non-positive register size or bad marked count.
        RangeError: marked index outside ``[0, n)``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("oracle document must be a JSON object")

    name = doc.get("name")
    if "name" in doc and not isinstance(name, str):
        raise ParseError(f"name must be a string, got {name!r}")

    has_marked = "marked" in doc
    has_compact = "t" in doc or "placement" in doc
    if has_marked and has_compact:
        raise ParseError("oracle document mixes explicit and compact fields")

    if has_marked:
        unknown = set(doc) - _EXPLICIT_KEYS
        if unknown:
            raise ParseError(f"unknown oracle fields: {sorted(unknown)}")
        if "n" not in doc:
            raise ParseError("oracle document missing field 'n'")
        n = _check_int(doc["n"], "n")
        raw = doc["marked"]
        if not isinstance(raw, list):
            raise ParseError(f"marked must be a list, got {raw!r}")
        indices = [_check_int(v, "marked index") for v in raw]
        normalized = sorted(set(indices))
        if normalized != indices:
            warnings.warn(
                "marked indices were sorted and deduplicated",
                OracleNormalizationWarning,
                stacklevel=2,
            )
        return OracleSpec(n, tuple(normalized), name)

    if has_compact:
        unknown = set(doc) - _COMPACT_KEYS
        if unknown:
            raise ParseError(f"unknown oracle fields: {sorted(unknown)}")
        for key in ("n", "t", "placement"):
            if key not in doc:
                raise ParseError(f"oracle document missing field {key!r}")
        n = _check_int(doc["n"], "n")
        t = _check_int(doc["t"], "t")
        placement = doc["placement"]
        if placement not in PLACEMENTS:
            raise ParseError(
                f"placement must be one of {PLACEMENTS}, got {placement!r}"
            )
        seed = _check_int(doc.get("seed", 0), "seed")
        return generate_oracle(n, t, placement, seed=seed, name=name)

    raise ParseError("oracle document needs either 'marked' or 't'/'placement'")


def generate_oracle(
    n_total: int,
    n_marked: int,
    placement: str = "first",
    seed: int = 0,
    name: str | None = None,
) -> OracleSpec:
    """Build an oracle by placement rule.

    ``"first"`` marks ``[0, t)``, ``"last"`` marks ``[n-t, n)`` and
    ``"random"`` draws ``t`` distinct indices from a PCG64 stream seeded
    with ``seed``, so the result is reproducible.
    """
    if isinstance(n_total, bool) or not isinstance(n_total, int) or n_total < 1:
        raise CountError(f"register size must be a positive integer, got {n_total!r}")
    if (
        isinstance(n_marked, bool)
        or not isinstance(n_marked, int)
        or not 0 <= n_marked <= n_total
    ):
        raise CountError(
            f"marked count must be an integer in [0, {n_total}], got {n_marked!r}"
        )
    if placement == "first":
        indices = range(n_marked)
    elif placement == "last":
        indices = range(n_total - n_marked, n_total)
    elif placement == "random":
        rng = np.random.Generator(np.random.PCG64(seed))
        indices = sorted(int(i) for i in rng.permutation(n_total)[:n_marked])
    else:
        raise ValueError(f"placement must be one of {PLACEMENTS}, got {placement!r}")
    return OracleSpec(n_total, tuple(indices), name)


def serialize_oracle(oracle: OracleSpec) -> str:
    """Serialize to the explicit JSON form; round-trips through parse_oracle."""
    doc: dict = {"n": oracle.n_total, "marked": list(oracle.marked)}
    if oracle.name is not None:
        doc["name"] = oracle.name
    return json.dumps(doc)
