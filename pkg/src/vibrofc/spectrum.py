"""Spectrum assembly: molecule specs, transition enumeration, engine dispatch.

A molecule spec fixes the two harmonic surfaces (dimensionless frequencies),
the mode mixing q' = Lambda q + gamma between them, the initial vibrational
state and the final-state cutoff. compute_spectrum evaluates one line per
final multi-index with the requested engine and reports the sum-rule deficit
1 - sum(P), which for a complete basis would vanish as the cutoff grows.

Method applicability is gated strictly, with no silent fallback: cross-method
agreement is the main diagnostic this tool offers, and substituting engines
behind the caller's back would defeat it.
"""

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .closed_form import fc_freq_1d, fc_line_engine, fc_shift_1d
from .errors import DimensionError, DomainError, MethodMismatchError, SpecError
from .oracle import QuadratureSpec, overlap_quadrature
from .states import DushinskyTransform, TransformedState, mode_eigenstate
from .tomography import tomographic_overlap

__all__ = [
    "MoleculeSpec",
    "SpectrumLine",
    "SpectrumResult",
    "parse_spec",
    "enumerate_final_states",
    "compute_spectrum",
    "write_spectrum",
    "read_spectrum",
]

METHODS = ("general", "shift", "freq", "quadrature", "tomographic")

CSV_HEADER = "initial_index;final_index;energy_offset;probability;method"


@dataclass(frozen=True)
class MoleculeSpec:
    """Validated description of one vibronic transition problem."""

    dimension: int
    initial_frequencies: np.ndarray
    final_frequencies: np.ndarray
    dushinsky: np.ndarray
    displacement: np.ndarray
    initial_quanta: tuple
    max_final_quanta: int | None = None

    def __post_init__(self):
        n = self.dimension
        if not isinstance(n, int) or n < 1:
            raise SpecError(f"dimension must be a positive integer, got {self.dimension!r}")
        for name in ("initial_frequencies", "final_frequencies", "displacement"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (n,):
                raise SpecError(f"{name} must have length {n}, got shape {arr.shape}")
            object.__setattr__(self, name, arr)
        for name in ("initial_frequencies", "final_frequencies"):
            arr = getattr(self, name)
            if np.any(arr <= 0):
                raise SpecError(f"{name} must be positive everywhere")
        lam = np.asarray(self.dushinsky, dtype=float)
        if lam.shape != (n, n):
            raise SpecError(f"dushinsky must be a {n}x{n} matrix, got shape {lam.shape}")
        if abs(np.linalg.det(lam)) <= 1e-12:
            raise SpecError("dushinsky is singular (|det| <= 1e-12)")
        object.__setattr__(self, "dushinsky", lam)
        quanta = tuple(int(k) for k in np.atleast_1d(self.initial_quanta))
        if len(quanta) != n or any(k < 0 for k in quanta):
            raise SpecError(f"initial_quanta must be {n} nonnegative integers, got {self.initial_quanta!r}")
        object.__setattr__(self, "initial_quanta", quanta)
        if self.max_final_quanta is not None:
            m = self.max_final_quanta
            if not isinstance(m, int) or isinstance(m, bool) or m < 0:
                raise SpecError(f"max_final_quanta must be a nonnegative integer, got {m!r}")


@dataclass(frozen=True)
class SpectrumLine:
    initial_index: tuple
    final_index: tuple
    energy_offset: float
    probability: float
    method: str


@dataclass(frozen=True)
class SpectrumResult:
    """Lines in enumeration order plus the run's sum-rule accounting."""

    lines: tuple
    sum_rule_deficit: float
    method: str
    cutoff: int


_FIELD_TYPES = {
    "dimension": "integer",
    "initial_frequencies": "array of numbers",
    "final_frequencies": "array of numbers",
    "dushinsky": "matrix (array of arrays)",
    "displacement": "array of numbers",
    "initial_quanta": "array of integers",
    "max_final_quanta": "integer",
}


def parse_spec(text):
    """Parse a JSON molecule spec; errors carry line/column or field names."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise SpecError("top-level value must be a JSON object")
    unknown = sorted(set(data) - set(_FIELD_TYPES))
    if unknown:
        raise SpecError(f"unknown field(s): {', '.join(unknown)}")
    missing = sorted(set(_FIELD_TYPES) - {"max_final_quanta"} - set(data))
    if missing:
        raise SpecError(f"missing required field(s): {', '.join(missing)}")

    def bad(field, value):
        return SpecError(f"field {field!r} must be {_FIELD_TYPES[field]}, got {value!r}")

    dim = data["dimension"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise bad("dimension", dim)
    vectors = {}
    for field in ("initial_frequencies", "final_frequencies", "displacement"):
        val = data[field]
        if not isinstance(val, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in val):
            raise bad(field, val)
        vectors[field] = val
    lam = data["dushinsky"]
    if not isinstance(lam, list) or not all(
        isinstance(row, list) and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in row)
        for row in lam
    ):
        raise bad("dushinsky", lam)
    quanta = data["initial_quanta"]
    if not isinstance(quanta, list) or not all(isinstance(k, int) and not isinstance(k, bool) for k in quanta):
        raise bad("initial_quanta", quanta)
    cutoff = data.get("max_final_quanta")
    if cutoff is not None and (not isinstance(cutoff, int) or isinstance(cutoff, bool)):
        raise bad("max_final_quanta", cutoff)

    return MoleculeSpec(
        dimension=dim,
        initial_frequencies=np.asarray(vectors["initial_frequencies"], dtype=float),
        final_frequencies=np.asarray(vectors["final_frequencies"], dtype=float),
        dushinsky=np.asarray(lam, dtype=float),
        displacement=np.asarray(vectors["displacement"], dtype=float),
        initial_quanta=tuple(quanta),
        max_final_quanta=cutoff,
    )


def _compositions(slots, total):
    if slots == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(slots - 1, total - head):
            yield (head,) + rest


def enumerate_final_states(n_modes, cutoff):
    """All multi-indices with sum <= cutoff, graded lexicographic order."""
    if not isinstance(n_modes, int) or n_modes < 1:
        raise DimensionError(f"n_modes must be a positive integer, got {n_modes!r}")
    if not isinstance(cutoff, int) or cutoff < 0:
        raise DomainError(f"cutoff must be a nonnegative integer, got {cutoff!r}")
    out = []
    for total in range(cutoff + 1):
        out.extend(_compositions(n_modes, total))
    return out


def _is_diagonal(mat):
    return not np.any(mat != np.diag(np.diagonal(mat)))


def _gate(spec, method):
    lam = spec.dushinsky
    n = spec.dimension
    if method == "shift":
        if not np.array_equal(lam, np.eye(n)):
            raise MethodMismatchError("method 'shift' requires an identity Duschinsky matrix")
        if not np.array_equal(spec.initial_frequencies, spec.final_frequencies):
            raise MethodMismatchError("method 'shift' requires identical initial and final frequencies")
    elif method == "freq":
        if np.any(spec.displacement != 0.0):
            raise MethodMismatchError("method 'freq' requires zero displacement")
        if not _is_diagonal(lam):
            raise MethodMismatchError("method 'freq' requires a diagonal Duschinsky matrix")
    elif method == "quadrature":
        if n > 3:
            raise MethodMismatchError("method 'quadrature' is limited to 3 modes")
    elif method == "tomographic":
        if n != 1:
            raise MethodMismatchError("method 'tomographic' is limited to a single mode")
    elif method != "general":
        raise DomainError(f"unknown method {method!r}; choose from {METHODS}")


def _build_engine(spec, method, epsilon):
    n = spec.dimension
    initial = mode_eigenstate(spec.initial_frequencies, spec.initial_quanta)
    transform = DushinskyTransform(spec.dushinsky, spec.displacement)

    if method == "general":
        template = mode_eigenstate(spec.final_frequencies, (0,) * n)
        return fc_line_engine(initial, template, transform)

    if method == "shift":
        om = spec.initial_frequencies
        gam = spec.displacement

        def shift_engine(m_idx):
            p = 1.0
            for k in range(n):
                p *= fc_shift_1d(spec.initial_quanta[k], m_idx[k], gam[k] * math.sqrt(om[k]))
            return p

        return shift_engine

    if method == "freq":
        om_i = spec.initial_frequencies
        # a diagonal Lambda rescales each final mode; the effective final
        # frequency seen by the overlap is Lambda_kk^2 omega'_k
        om_eff = np.diagonal(spec.dushinsky) ** 2 * spec.final_frequencies

        def freq_engine(m_idx):
            p = 1.0
            for k in range(n):
                p *= fc_freq_1d(spec.initial_quanta[k], m_idx[k], om_i[k], om_eff[k])
            return p

        return freq_engine

    if method == "quadrature":
        base_nodes = 64 + 4 * sum(spec.initial_quanta)

        def quad_engine(m_idx):
            final = mode_eigenstate(spec.final_frequencies, m_idx)
            # high-order Hermite factors need proportionally more nodes
            qspec = QuadratureSpec(nodes_per_axis=base_nodes + 4 * sum(m_idx))
            return overlap_quadrature(initial, TransformedState(final, transform), qspec)

        return quad_engine

    ladder = (0.8, 0.4, 0.2, 0.1, 0.05) if epsilon is None else tuple(epsilon * s for s in (16, 8, 4, 2, 1))

    def tomo_engine(m_idx):
        final = mode_eigenstate(spec.final_frequencies, m_idx)
        est = tomographic_overlap(initial, TransformedState(final, transform), epsilons=ladder)
        return min(max(est.value, 0.0), 1.0)

    return tomo_engine


def compute_spectrum(spec, method, threads=None, epsilon=None):
    """One SpectrumLine per enumerated final index, plus the sum-rule deficit.

    threads bounds the worker pool for the per-line map (enumeration order is
    preserved either way); epsilon tunes the tomographic damping ladder.
    """
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; choose from {METHODS}")
    if spec.max_final_quanta is None:
        raise SpecError("max_final_quanta is not set; supply it in the spec or override it")
    _gate(spec, method)

    finals = enumerate_final_states(spec.dimension, spec.max_final_quanta)
    engine = _build_engine(spec, method, epsilon)
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            probs = list(pool.map(engine, finals))
    else:
        probs = [engine(m) for m in finals]

    e_init = float(np.dot(spec.initial_quanta, spec.initial_frequencies))
    lines = tuple(
        SpectrumLine(
            initial_index=spec.initial_quanta,
            final_index=m,
            energy_offset=float(np.dot(m, spec.final_frequencies)) - e_init,
            probability=float(p),
            method=method,
        )
        for m, p in zip(finals, probs)
    )
    deficit = 1.0 - math.fsum(line.probability for line in lines)
    return SpectrumResult(lines=lines, sum_rule_deficit=deficit, method=method, cutoff=spec.max_final_quanta)


def _index_str(idx):
    return " ".join(str(int(k)) for k in idx)


def _parse_index(text):
    return tuple(int(tok) for tok in text.split())


def write_spectrum(lines, format, destination):
    """Serialize lines as CSV (semicolon-separated, quoted multi-indices) or JSON.

    destination may be a path or a file-like object. Floats are written with
    repr so both formats round-trip exactly.
    """
    if format not in ("csv", "json"):
        raise DomainError(f"unknown format {format!r}; choose csv or json")
    if format == "csv":
        rows = [CSV_HEADER]
        for ln in lines:
            rows.append(
                f'"{_index_str(ln.initial_index)}";"{_index_str(ln.final_index)}";'
                f"{ln.energy_offset!r};{ln.probability!r};{ln.method}"
            )
        payload = "\n".join(rows) + "\n"
    else:
        payload = json.dumps(
            [
                {
                    "initial_index": list(ln.initial_index),
                    "final_index": list(ln.final_index),
                    "energy_offset": ln.energy_offset,
                    "probability": ln.probability,
                    "method": ln.method,
                }
                for ln in lines
            ],
            indent=2,
        ) + "\n"
    if hasattr(destination, "write"):
        destination.write(payload)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)


def read_spectrum(source, format=None):
    """Inverse of write_spectrum; format is inferred from the content if omitted."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    if format is None:
        format = "json" if text.lstrip().startswith("[") else "csv"
    if format == "json":
        return [
            SpectrumLine(
                initial_index=tuple(obj["initial_index"]),
                final_index=tuple(obj["final_index"]),
                energy_offset=float(obj["energy_offset"]),
                probability=float(obj["probability"]),
                method=obj["method"],
            )
            for obj in json.loads(text)
        ]
    lines = []
    rows = [r for r in text.splitlines() if r]
    if not rows or rows[0] != CSV_HEADER:
        raise SpecError("missing or malformed CSV header")
    for row in rows[1:]:
        ini, fin, rest = row.split(";", 2)
        e_off, prob, method = rest.split(";")
        lines.append(
            SpectrumLine(
                initial_index=_parse_index(ini.strip('"')),
                final_index=_parse_index(fin.strip('"')),
                energy_offset=float(e_off),
                probability=float(prob),
                method=method,
            )
        )
    return lines


def sorted_by_probability(lines):
    """Descending probability, stable among ties."""
    return sorted(lines, key=lambda ln: -ln.probability)
