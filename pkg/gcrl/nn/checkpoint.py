"""Network and optimizer checkpoint files.

Network file format (``*.mlp``)::

    gcrl-mlp v1\n
    layer_sizes <n0> <n1> ... <nk>\n
    activation <relu> output <identity|tanh_gaussian_head>\n
    <param_count little-endian float64 values in canonical order>

Optimizer states are stored with :func:`numpy.savez` (``*.npz``).
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np

from ..exceptions import ConfigParseError
from .mlp import Activation, Mlp, OutputActivation
from .optim import AdamState

logger = logging.getLogger(__name__)

MAGIC = b"gcrl-mlp v1\n"


def save_mlp(net: Mlp, path: Union[str, Path]) -> Path:
    """Write ``net`` to ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = (
        MAGIC
        + ("layer_sizes " + " ".join(str(s) for s in net.layer_sizes) + "\n").encode()
        + f"activation {net.activation.value} output {net.output_activation.value}\n".encode()
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(net.params.astype("<f8").tobytes())
    logger.debug("Saved %r to %s", net, path)
    return path


def load_mlp(path: Union[str, Path]) -> Mlp:
    """Read a network written by :func:`save_mlp`."""
    path = Path(path)
    with open(path, "rb") as f:
        magic = f.readline()
        if magic != MAGIC:
            raise ConfigParseError("Not a gcrl network checkpoint", str(path), 1)
        sizes_line = f.readline().decode().split()
        if not sizes_line or sizes_line[0] != "layer_sizes":
            raise ConfigParseError("Missing layer_sizes", str(path), 2)
        act_line = f.readline().decode().split()
        if len(act_line) != 4 or act_line[0] != "activation" or act_line[2] != "output":
            raise ConfigParseError("Missing activation line", str(path), 3)
        payload = f.read()

    layer_sizes = [int(s) for s in sizes_line[1:]]
    params = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    expected = Mlp.count_parameters(layer_sizes)
    if params.size != expected:
        raise ConfigParseError(
            f"Checkpoint holds {params.size} values, expected {expected}", str(path)
        )
    return Mlp(
        layer_sizes,
        Activation(act_line[1]),
        OutputActivation(act_line[3]),
        params=params,
    )


def save_adam(state: AdamState, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        np.savez(
            f,
            m=state.m,
            v=state.v,
            step=np.int64(state.step),
            hyper=np.array([state.lr, state.beta1, state.beta2, state.eps]),
        )
    return path


def load_adam(path: Union[str, Path]) -> AdamState:
    with np.load(Path(path)) as data:
        lr, beta1, beta2, eps = (float(x) for x in data["hyper"])
        return AdamState(
            m=data["m"].copy(),
            v=data["v"].copy(),
            step=int(data["step"]),
            lr=lr,
            beta1=beta1,
            beta2=beta2,
            eps=eps,
        )
