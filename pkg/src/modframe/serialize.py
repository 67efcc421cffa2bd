"""JSON codecs for every on-disk object.

Complex numbers are ``[re, im]`` pairs and matrices are row-major lists of
them; floats go through Python's shortest round-trip repr, so documents are
bit-exact under load/dump cycles. Schemas:

* matrix:          ``{"rows": r, "cols": c, "entries": [[re, im], ...]}``
* algebra element: ``{"shape": [k1, ...], "blocks": [[[re, im], ...], ...]}``
  (one row-major entry list per block)
* module vector:   ``{"rank": n, "shape": [...], "coords": [element, ...]}``
* module operator: ``{"shape": [...], "in_rank": n, "out_rank": m,
  "entries": [[element, ...], ...]}`` (entries[q][p], row q = input slot)
* submodule:       ``{"rank": n, "shape": [...], "projection": operator|null}``
* frame file:      ``{"module": submodule, "elements": [vector, ...]}``
* gram invariant:  ``{"k": k, "gram": [[element, ...], ...]}``
* resolution:      ``{"d": d, "b": [matrix, ...]}``
* hilbert frame:   ``{"dim": n, "vectors": [[[re, im], ...], ...]}``
"""

from __future__ import annotations

import json

import numpy as np

from .cstar import AlgebraElement, AlgebraShape
from .errors import ParseError
from .frames import Frame, FrameReport
from .invariants import GramInvariant
from .module_space import ModuleOperator, ModuleVector, SubmoduleDescriptor
from .resolution import ResolutionSequence
from .tight import HilbertFrame

__all__ = [
    "complex_to_json",
    "matrix_to_json",
    "matrix_from_json",
    "element_to_json",
    "element_from_json",
    "vector_to_json",
    "vector_from_json",
    "operator_to_json",
    "operator_from_json",
    "submodule_to_json",
    "submodule_from_json",
    "frame_to_json",
    "frame_from_json",
    "report_to_json",
    "gram_invariant_to_json",
    "gram_invariant_from_json",
    "resolution_to_json",
    "resolution_from_json",
    "hilbert_frame_to_json",
    "hilbert_frame_from_json",
    "dumps",
]


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, shortest round-trip floats."""
    return json.dumps(obj, sort_keys=True, indent=2)


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _complex_from_json(v):
    try:
        re, im = float(v[0]), float(v[1])
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"bad complex entry {v!r}") from exc
    return complex(re, im)


def matrix_to_json(m) -> dict:
    a = np.asarray(m, dtype=np.complex128)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "entries": [complex_to_json(z) for z in a.ravel()],
    }


def matrix_from_json(doc) -> np.ndarray:
    try:
        rows, cols = int(doc["rows"]), int(doc["cols"])
        entries = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("matrix document needs rows/cols/entries") from exc
    if len(entries) != rows * cols:
        raise ParseError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = np.array([_complex_from_json(v) for v in entries], dtype=np.complex128)
    return flat.reshape(rows, cols)


def element_to_json(a: AlgebraElement) -> dict:
    return {
        "shape": list(a.shape.blocks),
        "blocks": [[complex_to_json(z) for z in b.ravel()] for b in a.blocks],
    }


def element_from_json(doc) -> AlgebraElement:
    try:
        shape = AlgebraShape(tuple(int(k) for k in doc["shape"]))
        raw = doc["blocks"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("algebra element needs shape/blocks") from exc
    if len(raw) != len(shape.blocks):
        raise ParseError("block count does not match shape")
    blocks = []
    for k, entries in zip(shape.blocks, raw):
        if len(entries) != k * k:
            raise ParseError(f"block needs {k * k} entries, got {len(entries)}")
        flat = np.array([_complex_from_json(v) for v in entries], dtype=np.complex128)
        blocks.append(flat.reshape(k, k))
    return AlgebraElement(shape, blocks)


def vector_to_json(x: ModuleVector) -> dict:
    return {
        "rank": x.rank,
        "shape": list(x.shape.blocks),
        "coords": [element_to_json(c) for c in x.coords],
    }


def vector_from_json(doc) -> ModuleVector:
    try:
        rank = int(doc["rank"])
        shape = AlgebraShape(tuple(int(k) for k in doc["shape"]))
        coords = [element_from_json(c) for c in doc["coords"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("module vector needs rank/shape/coords") from exc
    if len(coords) != rank:
        raise ParseError("coordinate count does not match rank")
    return ModuleVector(shape, coords)


def operator_to_json(t: ModuleOperator) -> dict:
    return {
        "shape": list(t.shape.blocks),
        "in_rank": t.in_rank,
        "out_rank": t.out_rank,
        "entries": [[element_to_json(e) for e in row] for row in t.entries],
    }


def operator_from_json(doc) -> ModuleOperator:
    try:
        shape = AlgebraShape(tuple(int(k) for k in doc["shape"]))
        entries = [[element_from_json(e) for e in row] for row in doc["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("module operator needs shape/entries") from exc
    return ModuleOperator(shape, entries)


def submodule_to_json(m: SubmoduleDescriptor) -> dict:
    return {
        "rank": m.rank,
        "shape": list(m.shape.blocks),
        "projection": None if m.projection is None else operator_to_json(m.projection),
    }


def submodule_from_json(doc) -> SubmoduleDescriptor:
    try:
        rank = int(doc["rank"])
        shape = AlgebraShape(tuple(int(k) for k in doc["shape"]))
        proj = doc.get("projection")
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("submodule needs rank/shape") from exc
    projection = None if proj is None else operator_from_json(proj)
    try:
        return SubmoduleDescriptor(shape, rank, projection)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def frame_to_json(f: Frame) -> dict:
    return {
        "module": submodule_to_json(f.module),
        "elements": [vector_to_json(x) for x in f.elements],
    }


def frame_from_json(doc) -> Frame:
    try:
        module = submodule_from_json(doc["module"])
        elements = [vector_from_json(x) for x in doc["elements"]]
    except (KeyError, TypeError) as exc:
        raise ParseError("frame file needs module/elements") from exc
    return Frame(module, elements)


def report_to_json(r: FrameReport) -> dict:
    doc = r.to_dict()
    doc["support"] = operator_to_json(r.support)
    return doc


def gram_invariant_to_json(g: GramInvariant) -> dict:
    return {
        "k": g.k,
        "gram": [[element_to_json(e) for e in row] for row in g.gram],
    }


def gram_invariant_from_json(doc) -> GramInvariant:
    try:
        k = int(doc["k"])
        gram = tuple(tuple(element_from_json(e) for e in row) for row in doc["gram"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("gram invariant needs k/gram") from exc
    if len(gram) != k or any(len(row) != k for row in gram):
        raise ParseError("gram matrix is not k x k")
    return GramInvariant(k=k, gram=gram)


def resolution_to_json(seq: ResolutionSequence) -> dict:
    return {"d": seq.d, "b": [matrix_to_json(b) for b in seq.blocks]}


def resolution_from_json(doc) -> ResolutionSequence:
    try:
        d = int(doc["d"])
        blocks = [matrix_from_json(b) for b in doc["b"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("resolution document needs d/b") from exc
    for b in blocks:
        if b.shape != (d, d):
            raise ParseError("resolution blocks must be d x d")
    return ResolutionSequence(blocks)


def hilbert_frame_to_json(f: HilbertFrame) -> dict:
    return {
        "dim": f.dim,
        "vectors": [[complex_to_json(z) for z in row] for row in f.vectors],
    }


def hilbert_frame_from_json(doc) -> HilbertFrame:
    try:
        dim = int(doc["dim"])
        rows = [[_complex_from_json(z) for z in row] for row in doc["vectors"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("hilbert frame needs dim/vectors") from exc
    for row in rows:
        if len(row) != dim:
            raise ParseError("vector length does not match dim")
    return HilbertFrame(np.array(rows, dtype=np.complex128))
