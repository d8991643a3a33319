"""
Finite-support kernel tables and kernel lookup by name or file.

Format:
    d m
    m lines "value probability"
    m^d lines with ψ on the support grid, row-major (last argument fastest)
"""
from pathlib import Path
from typing import Union

import numpy as np

from stein_embed.exceptions import FormatError, InvalidModel
from stein_embed.registry import KERNEL_MODEL, registry
from stein_embed.ustats.kernels import FiniteSupport, KernelModel, finite_kernel


def parse_kernel_table(text: str, name: str = 'table') -> KernelModel:
    rows = [(no, line.split()) for no, line in enumerate(text.splitlines(), start=1)]
    rows = [(no, parts) for no, parts in rows if parts and not parts[0].startswith('#')]
    if not rows:
        raise FormatError('empty kernel table')

    no, header = rows[0]
    try:
        d, m = (int(v) for v in header)
    except ValueError:
        raise FormatError('header must be "d m"', no)
    if d < 1 or m < 1:
        raise FormatError('d and m must be positive', no)
    expected = 1 + m + m ** d
    if len(rows) != expected:
        raise FormatError(f'expected {expected} data lines, found {len(rows)}', rows[-1][0])

    values, probs = [], []
    for no, parts in rows[1:1 + m]:
        if len(parts) != 2:
            raise FormatError('support line must be "value probability"', no)
        try:
            values.append(float(parts[0]))
            probs.append(float(parts[1]))
        except ValueError:
            raise FormatError('support entries must be numbers', no)
    if abs(sum(probs) - 1.0) > 1e-12:
        raise FormatError(f'probabilities sum to {sum(probs)!r}, not 1', rows[m][0])

    psi = []
    for no, parts in rows[1 + m:]:
        if len(parts) != 1:
            raise FormatError('kernel line must hold a single value', no)
        try:
            psi.append(float(parts[0]))
        except ValueError:
            raise FormatError('kernel value must be a number', no)

    order = np.argsort(values)
    if np.any(np.diff(np.asarray(values)[order]) == 0):
        raise FormatError('duplicate support value')
    table = np.asarray(psi).reshape((m,) * d)
    # reorder every axis to increasing support values
    for axis in range(d):
        table = np.take(table, order, axis=axis)
    try:
        support = FiniteSupport(np.asarray(values)[order], np.asarray(probs)[order])
        return finite_kernel(name, support, table, description=f'table kernel, d={d}, m={m}')
    except InvalidModel as e:
        raise FormatError(str(e))


def read_kernel_table(path: Union[str, Path]) -> KernelModel:
    path = Path(path)
    return parse_kernel_table(path.read_text(), name=path.stem)


def format_kernel_table(km: KernelModel) -> str:
    """Serialise a finite-support kernel in the table format."""
    if km.support is None:
        raise ValueError(f'kernel {km.name} has no finite support')
    support = km.support
    grid, _ = support.grid(km.d)
    lines = [f'{km.d} {support.size}']
    lines += [f'{float(v)!r} {float(p)!r}' for v, p in zip(support.values, support.probs)]
    lines += [repr(float(v)) for v in km.psi_k(km.d)(grid)]
    return '\n'.join(lines) + '\n'


def get_kernel(spec: str) -> KernelModel:
    """
    Built-in kernel by name, or a kernel table file given as 'path:FILE' or a path.

    Raises:
        KeyError: unknown name
        FormatError: malformed table file
    """
    if spec.startswith('path:'):
        return read_kernel_table(spec[len('path:'):])
    if spec not in registry.names(KERNEL_MODEL) and Path(spec).is_file():
        return read_kernel_table(spec)
    return registry.get(KERNEL_MODEL, spec)


def kernel_names():
    return registry.names(KERNEL_MODEL)
