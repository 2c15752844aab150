"""Dense multilayer perceptron with manual backpropagation.

All parameters of a network live in one flat float64 vector. The per-layer
``weights`` and ``biases`` are views into that vector, laid out in the
canonical order: layers in order, weights before biases, row-major weights
of shape ``(layer_sizes[i + 1], layer_sizes[i])``.
"""

from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import NumericError, ShapeError, UsageError


class Activation(Enum):
    """Hidden-layer activation."""

    RELU = "relu"


class OutputActivation(Enum):
    """Interpretation of the output layer."""

    IDENTITY = "identity"
    # raw output is a concatenated (mean, log_std) pair consumed by
    # gcrl.nn.squashed_gaussian
    TANH_GAUSSIAN_HEAD = "tanh_gaussian_head"


class Mlp:
    """Fully connected ReLU network over float64 arrays."""

    def __init__(
        self,
        layer_sizes: Sequence[int],
        activation: Activation = Activation.RELU,
        output_activation: OutputActivation = OutputActivation.IDENTITY,
        rng: Optional[np.random.Generator] = None,
        params: Optional[np.ndarray] = None,
    ):
        sizes = [int(s) for s in layer_sizes]
        if len(sizes) < 2 or any(s < 1 for s in sizes):
            raise ShapeError(f"Invalid layer sizes: {list(layer_sizes)}")
        if output_activation is OutputActivation.TANH_GAUSSIAN_HEAD and sizes[-1] % 2:
            raise ShapeError(
                f"Gaussian head needs an even output size, got {sizes[-1]}"
            )

        self.layer_sizes: List[int] = sizes
        self.activation = activation
        self.output_activation = output_activation
        self.params = np.zeros(self.count_parameters(sizes), dtype=np.float64)
        self.weights, self.biases = self._views(self.params)
        self._cache: Optional[Tuple[bool, List[np.ndarray], List[np.ndarray]]] = None

        if params is not None:
            self.set_params(params)
        elif rng is not None:
            self._initialize(rng)

    @staticmethod
    def count_parameters(layer_sizes: Sequence[int]) -> int:
        """Number of scalars in weights and biases."""
        return sum(
            layer_sizes[i + 1] * (layer_sizes[i] + 1)
            for i in range(len(layer_sizes) - 1)
        )

    @property
    def param_count(self) -> int:
        return self.params.size

    @property
    def n_layers(self) -> int:
        return len(self.layer_sizes) - 1

    @property
    def input_size(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_size(self) -> int:
        return self.layer_sizes[-1]

    def _views(self, flat: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray]]:
        weights, biases = [], []
        offset = 0
        for fan_in, fan_out in zip(self.layer_sizes[:-1], self.layer_sizes[1:]):
            weights.append(flat[offset:offset + fan_out * fan_in].reshape(fan_out, fan_in))
            offset += fan_out * fan_in
            biases.append(flat[offset:offset + fan_out])
            offset += fan_out
        return weights, biases

    def _initialize(self, rng: np.random.Generator) -> None:
        # uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases
        for weight, bias in zip(self.weights, self.biases):
            bound = 1.0 / np.sqrt(weight.shape[1])
            weight[...] = rng.uniform(-bound, bound, size=weight.shape)
            bias[...] = rng.uniform(-bound, bound, size=bias.shape)

    def set_params(self, params: np.ndarray) -> None:
        """Copy a flat parameter vector into the network."""
        params = np.asarray(params, dtype=np.float64)
        if params.shape != self.params.shape:
            raise ShapeError(
                f"Expected {self.params.size} parameters, got shape {params.shape}"
            )
        self.params[...] = params
        self._cache = None

    def copy(self) -> "Mlp":
        """Independent network with identical parameters."""
        return Mlp(
            self.layer_sizes,
            self.activation,
            self.output_activation,
            params=self.params.copy(),
        )

    def forward(self, inputs: np.ndarray) -> np.ndarray:
        """Evaluate the network on one vector or a batch of row vectors.

        The activations are cached for a following :meth:`backward` call.
        """
        x = np.asarray(inputs, dtype=np.float64)
        single = x.ndim == 1
        if single:
            x = x[np.newaxis, :]
        if x.ndim != 2 or x.shape[1] != self.input_size:
            raise ShapeError(
                f"Input shape {np.shape(inputs)} does not match input size {self.input_size}"
            )

        activations = [x]
        pre_activations = []
        h = x
        for i, (weight, bias) in enumerate(zip(self.weights, self.biases)):
            z = h @ weight.T + bias
            pre_activations.append(z)
            h = np.maximum(z, 0.0) if i < self.n_layers - 1 else z
            activations.append(h)

        if not np.all(np.isfinite(h)):
            raise NumericError(
                "Non-finite network output",
                {"layer_sizes": self.layer_sizes, "params_finite": bool(np.all(np.isfinite(self.params)))},
            )

        self._cache = (single, activations, pre_activations)
        return h[0] if single else h

    def backward(self, upstream_grad: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Backpropagate ``upstream_grad`` (dL/d output) through the cached pass.

        Returns:
            ``(param_grad, input_grad)`` where ``param_grad`` is aligned with
            :attr:`params` and summed over the batch.
        """
        if self._cache is None:
            raise UsageError("backward() called without a cached forward pass")
        single, activations, pre_activations = self._cache

        delta = np.asarray(upstream_grad, dtype=np.float64)
        if single and delta.ndim == 1:
            delta = delta[np.newaxis, :]
        expected = activations[-1].shape
        if delta.shape != expected:
            raise ShapeError(
                f"Upstream gradient shape {np.shape(upstream_grad)} does not match output {expected}"
            )

        grad = np.zeros_like(self.params)
        grad_weights, grad_biases = self._views(grad)
        for i in reversed(range(self.n_layers)):
            grad_weights[i][...] = delta.T @ activations[i]
            grad_biases[i][...] = delta.sum(axis=0)
            delta = delta @ self.weights[i]
            if i > 0:
                delta = delta * (pre_activations[i - 1] > 0.0)

        return grad, (delta[0] if single else delta)

    def __repr__(self) -> str:
        return (
            f"Mlp(layer_sizes={self.layer_sizes}, "
            f"output_activation={self.output_activation.value})"
        )
