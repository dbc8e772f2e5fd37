"""Text file formats.

Sparse Hermitian matrix::

    N s
    i j re im        # 0-based, upper triangle only

General (rectangular) matrix, used by ``solve-general``::

    M N
    i j re im        # every nonzero entry

Dense vector::

    N
    re im            # one line per entry

State dump: a layout header ``name:dim,...`` followed by ``re im`` per
amplitude in flat order (first register slowest).

Circuit::

    n T
    wires g1 [g2] NAME | entries...

where ``wires`` is 1 or 2 and the gate is a named shorthand or a 2x2 / 4x4
matrix given row-major either as complex literals (``0.5+0.5j``) or as
``re im`` pairs.  Blank lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import FormatError, HHLError


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _ints(tokens, count, path, lineno, what):
    if len(tokens) != count:
        raise FormatError(f"expected {count} integers for {what}, got {len(tokens)} tokens", path, lineno)
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"non-integer token in {what}: {' '.join(tokens)}", path, lineno) from None


def _floats(tokens, path, lineno):
    try:
        vals = [float(t) for t in tokens]
    except ValueError:
        raise FormatError(f"non-numeric token in {' '.join(tokens)}", path, lineno) from None
    if not all(np.isfinite(vals)):
        raise FormatError("non-finite value", path, lineno)
    return vals


def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror}", str(path)) from None


def _coordinate_entries(text, path):
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty file", path, 1)
    lineno, head = lines[0]
    a, b = _ints(head, 2, path, lineno, "header")
    entries = []
    for lineno, tok in lines[1:]:
        if len(tok) != 4:
            raise FormatError(f"expected 'i j re im', got {len(tok)} tokens", path, lineno)
        i, j = _ints(tok[:2], 2, path, lineno, "indices")
        re, im = _floats(tok[2:], path, lineno)
        entries.append((lineno, i, j, complex(re, im)))
    return (a, b), entries


def parse_sparse_matrix(text: str, path: str | None = None):
    from .linalg import SparseHermitianMatrix

    (n, s), entries = _coordinate_entries(text, path)
    if n < 1 or s < 0:
        raise FormatError(f"bad header N={n} s={s}", path, 1)
    a = np.zeros((n, n), dtype=complex)
    for lineno, i, j, v in entries:
        if not (0 <= i < n and 0 <= j < n):
            raise FormatError(f"index ({i}, {j}) out of range for N={n}", path, lineno)
        if j < i:
            raise FormatError(f"entry ({i}, {j}) below the diagonal; give the upper triangle only", path, lineno)
        if i == j and v.imag != 0.0:
            raise FormatError(f"diagonal entry ({i}, {i}) must be real", path, lineno)
        a[i, j] = v
        a[j, i] = np.conj(v)
    nnz = int(np.max(np.count_nonzero(a, axis=1)))
    if nnz > s:
        raise FormatError(f"a row has {nnz} nonzeros but the header declares s={s}", path, 1)
    return SparseHermitianMatrix.from_dense(a)


def parse_general_matrix(text: str, path: str | None = None) -> np.ndarray:
    (m, n), entries = _coordinate_entries(text, path)
    if m < 1 or n < 1:
        raise FormatError(f"bad header M={m} N={n}", path, 1)
    a = np.zeros((m, n), dtype=complex)
    for lineno, i, j, v in entries:
        if not (0 <= i < m and 0 <= j < n):
            raise FormatError(f"index ({i}, {j}) out of range for {m}x{n}", path, lineno)
        a[i, j] = v
    return a


def parse_vector(text: str, path: str | None = None) -> np.ndarray:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty file", path, 1)
    lineno, head = lines[0]
    (n,) = _ints(head, 1, path, lineno, "length header")
    body = lines[1:]
    if len(body) != n:
        where = body[-1][0] if body else lineno
        raise FormatError(f"header declares {n} entries, found {len(body)}", path, where)
    out = np.empty(n, dtype=complex)
    for k, (lineno, tok) in enumerate(body):
        if len(tok) != 2:
            raise FormatError(f"expected 're im', got {len(tok)} tokens", path, lineno)
        re, im = _floats(tok, path, lineno)
        out[k] = complex(re, im)
    return out


def parse_state_dump(text: str, path: str | None = None):
    from .qstate import QuantumState, RegisterLayout

    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty file", path, 1)
    lineno, head = lines[0]
    try:
        layout = RegisterLayout.parse(" ".join(head))
    except (ValueError, HHLError) as exc:
        raise FormatError(f"bad layout header: {exc}", path, lineno) from None
    body = lines[1:]
    if len(body) != layout.size:
        raise FormatError(f"layout needs {layout.size} amplitudes, found {len(body)}", path, lineno)
    amps = np.empty(layout.size, dtype=complex)
    for k, (lineno, tok) in enumerate(body):
        if len(tok) != 2:
            raise FormatError(f"expected 're im', got {len(tok)} tokens", path, lineno)
        re, im = _floats(tok, path, lineno)
        amps[k] = complex(re, im)
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise FormatError("state has zero norm", path, 2)
    if abs(norm - 1.0) > 1e-12:
        amps = amps / norm
    return QuantumState(layout, amps)


def parse_state_or_vector(text: str, path: str | None = None):
    """State dump if the first line has a ``name:dim`` header, else a dense vector."""
    from .qstate import prepare_amplitudes

    first = next(_lines(text), (1, [""]))[1]
    if ":" in first[0]:
        return parse_state_dump(text, path)
    return prepare_amplitudes(parse_vector(text, path))


def parse_circuit(text: str, path: str | None = None):
    from .clock import ClockCircuit, Gate, named_gate

    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty file", path, 1)
    lineno, head = lines[0]
    n, t = _ints(head, 2, path, lineno, "header 'n T'")
    if n < 1 or t < 1:
        raise FormatError(f"need n >= 1 and T >= 1, got n={n} T={t}", path, lineno)
    body = lines[1:]
    if len(body) != t:
        raise FormatError(f"header declares T={t} gates, found {len(body)}", path, lineno)
    gates = []
    for lineno, tok in body:
        try:
            k = int(tok[0])
        except ValueError:
            raise FormatError(f"first token must be the wire count, got {tok[0]!r}", path, lineno) from None
        if k not in (1, 2) or len(tok) < k + 2:
            raise FormatError("expected 'wires g1 [g2] NAME|matrix'", path, lineno)
        wires = tuple(_ints(tok[1 : 1 + k], k, path, lineno, "wire indices"))
        if any(not 0 <= w < n for w in wires) or len(set(wires)) != k:
            raise FormatError(f"bad wires {wires} for n={n}", path, lineno)
        rest = tok[1 + k :]
        d = 2**k
        try:
            if len(rest) == 1 and not _is_number(rest[0]):
                gate = named_gate(rest[0], wires)
            else:
                if len(rest) == d * d:
                    vals = [complex(x) for x in rest]
                elif len(rest) == 2 * d * d:
                    fl = _floats(rest, path, lineno)
                    vals = [complex(fl[2 * i], fl[2 * i + 1]) for i in range(d * d)]
                else:
                    raise FormatError(f"a {d}x{d} gate needs {d * d} complex or {2 * d * d} real entries", path, lineno)
                gate = Gate(wires, np.array(vals, dtype=complex).reshape(d, d))
        except FormatError:
            raise
        except (ValueError, KeyError, HHLError) as exc:
            raise FormatError(str(exc), path, lineno) from None
        gates.append(gate)
    try:
        return ClockCircuit(n, tuple(gates))
    except (ValueError, HHLError) as exc:
        raise FormatError(str(exc), path) from None


def _is_number(token: str) -> bool:
    try:
        complex(token)
    except ValueError:
        return False
    return True


def load_sparse_matrix(path):
    return parse_sparse_matrix(read_text(path), str(path))


def load_general_matrix(path):
    return parse_general_matrix(read_text(path), str(path))


def load_vector(path):
    return parse_vector(read_text(path), str(path))


def load_state_or_vector(path):
    return parse_state_or_vector(read_text(path), str(path))


def load_circuit(path):
    return parse_circuit(read_text(path), str(path))


def format_sparse_matrix(a) -> str:
    lines = [f"{a.dim} {a.sparsity}"]
    lines += [f"{i} {j} {v.real:.17g} {v.imag:.17g}" for i, j, v in a.upper_entries()]
    return "\n".join(lines) + "\n"


def format_vector(v) -> str:
    v = np.asarray(v, dtype=complex).reshape(-1)
    lines = [str(v.size)] + [f"{z.real:.17g} {z.imag:.17g}" for z in v]
    return "\n".join(lines) + "\n"


def format_general_matrix(a) -> str:
    a = np.asarray(a, dtype=complex)
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    for i, j in zip(*np.nonzero(a)):
        z = a[i, j]
        lines.append(f"{i} {j} {z.real:.17g} {z.imag:.17g}")
    return "\n".join(lines) + "\n"
