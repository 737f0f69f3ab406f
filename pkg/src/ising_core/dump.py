"""
Edge-list text format for Ising models

    SPINS <n>
    OFFSET <c>
    AUX <index>
    <i> <j> <J_ij>        one line per nonzero coupling with i < j

'#' starts a comment. External solvers only need the coupling lines.
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np

from ..errors import ParseError
from .model import IsingModel

logger = logging.getLogger(__name__)


def format_ising_dump(model: IsingModel) -> str:
    lines = [f"# Ising model: E = OFFSET - sum_(i<j) J_ij s_i s_j",
             f"SPINS {model.n_spins}",
             f"OFFSET {model.offset!r}"]
    if model.aux_index is not None:
        lines.append(f"AUX {model.aux_index}")
    rows, cols = np.nonzero(np.triu(model.couplings, 1))
    for i, j in zip(rows.tolist(), cols.tolist()):
        lines.append(f"{i} {j} {float(model.couplings[i, j])!r}")
    return "\n".join(lines) + "\n"


def write_ising_dump(model: IsingModel, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(format_ising_dump(model))
    logger.info(f"Wrote Ising model dump ({model.n_spins} spins) to {path}")
    return path


def parse_ising_dump(text: str, source: str = "<string>") -> IsingModel:
    """Parse the edge-list format back into an IsingModel."""
    n_spins = None
    offset = 0.0
    aux_index = None
    edges = []

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "SPINS" and len(parts) == 2:
                n_spins = int(parts[1])
            elif parts[0] == "OFFSET" and len(parts) == 2:
                offset = float(parts[1])
            elif parts[0] == "AUX" and len(parts) == 2:
                aux_index = int(parts[1])
            elif len(parts) == 3:
                edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
            else:
                raise ValueError(f"unrecognized line '{line}'")
        except ValueError as e:
            raise ParseError(str(e), line_number=line_number, path=source) from e

    if n_spins is None:
        indices = [max(i, j) for i, j, _ in edges]
        if aux_index is not None:
            indices.append(aux_index)
        if not indices:
            raise ParseError("empty model: no SPINS line and no couplings", path=source)
        n_spins = max(indices) + 1

    couplings = np.zeros((n_spins, n_spins))
    for i, j, value in edges:
        if not (0 <= i < n_spins and 0 <= j < n_spins) or i == j:
            raise ParseError(f"invalid coupling index pair ({i}, {j})", path=source)
        couplings[i, j] = value
        couplings[j, i] = value
    return IsingModel(couplings=couplings, offset=offset, aux_index=aux_index)


def read_ising_dump(path: Union[str, Path]) -> IsingModel:
    path = Path(path)
    return parse_ising_dump(path.read_text(), source=str(path))
