"""Linear classifiers trained with full-batch descent in JAX
"""

__all__ = [
    "LinearModel",
    "logistic_loss",
    "hinge_objective",
    "fit_logistic_regression",
    "fit_linear_svm",
]

from collections.abc import Sequence
from functools import partial

import equinox as eqx
import jax
import jax.numpy as jnp
import numpy as np

from kinemark.types import Array


def _margin(params: tuple[Array, Array], X: Array) -> Array:
    w, b = params
    return X @ w + b


def logistic_loss(
    params: tuple[Array, Array], X: Array, y: Array, l2: float
) -> Array:
    """Mean logistic loss plus ``l2 / 2 * |w|^2``"""
    z = _margin(params, X)
    return jnp.mean(jnp.logaddexp(0.0, z) - y * z) + 0.5 * l2 * jnp.sum(params[0] ** 2)


def hinge_objective(
    params: tuple[Array, Array], X: Array, y: Array, l2: float
) -> Array:
    """Mean hinge loss on labels mapped to -1/+1 plus ``l2 / 2 * |w|^2``"""
    s = 2.0 * y - 1.0
    z = _margin(params, X)
    return jnp.mean(jnp.maximum(0.0, 1.0 - s * z)) + 0.5 * l2 * jnp.sum(params[0] ** 2)


def _step(params, direction, eta):
    return jax.tree_util.tree_map(lambda p, d: p - eta * d, params, direction)


def _where(accept, new, old):
    return jax.tree_util.tree_map(lambda a, b: jnp.where(accept, a, b), new, old)


def _sq_norm(tree) -> Array:
    return sum(jnp.sum(leaf**2) for leaf in jax.tree_util.tree_leaves(tree))


@partial(jax.jit, static_argnames=("epochs",))
def _logistic_descent(X, y, l2, epochs, tol):
    loss_and_grad = jax.value_and_grad(logistic_loss)
    params = (jnp.zeros(X.shape[1]), jnp.zeros(()))

    def backtrack(params, loss, grad, eta):
        # Armijo condition, halving the step until the loss decreases enough
        def cond(state):
            eta, trial = state
            return (trial > loss - 0.5 * eta * _sq_norm(grad)) & (eta > 1e-12)

        def body(state):
            eta, _ = state
            eta = 0.5 * eta
            return eta, logistic_loss(_step(params, grad, eta), X, y, l2)

        first = logistic_loss(_step(params, grad, eta), X, y, l2)
        return jax.lax.while_loop(cond, body, (eta, first))

    def cond(state):
        epoch, _, _, change, _ = state
        return (epoch < epochs) & (change > tol)

    def body(state):
        epoch, params, loss, _, eta = state
        _, grad = loss_and_grad(params, X, y, l2)
        eta, trial = backtrack(params, loss, grad, 2.0 * eta)
        accept = trial <= loss
        new_params = _where(accept, _step(params, grad, eta), params)
        new_loss = jnp.where(accept, trial, loss)
        return epoch + 1, new_params, new_loss, loss - new_loss, eta

    loss0 = logistic_loss(params, X, y, l2)
    state = (jnp.asarray(0), params, loss0, jnp.asarray(jnp.inf), jnp.asarray(1.0))
    _, params, _, _, _ = jax.lax.while_loop(cond, body, state)
    return params


@partial(jax.jit, static_argnames=("epochs",))
def _hinge_descent(X, y, l2, epochs):
    objective_and_grad = jax.value_and_grad(hinge_objective)
    params = (jnp.zeros(X.shape[1]), jnp.zeros(()))

    def body(epoch, state):
        params, objective, history = state
        _, grad = objective_and_grad(params, X, y, l2)

        # Decaying subgradient step, halved until the objective does not increase
        def cond(inner):
            eta, trial = inner
            return (trial > objective) & (eta > 1e-10)

        def shrink(inner):
            eta, _ = inner
            eta = 0.5 * eta
            return eta, hinge_objective(_step(params, grad, eta), X, y, l2)

        eta0 = jnp.asarray(1.0 / jnp.sqrt(epoch + 1.0), dtype=objective.dtype)
        eta, trial = jax.lax.while_loop(
            cond, shrink, (eta0, hinge_objective(_step(params, grad, eta0), X, y, l2))
        )
        accept = trial <= objective
        params = _where(accept, _step(params, grad, eta), params)
        objective = jnp.where(accept, trial, objective)
        return params, objective, history.at[epoch].set(objective)

    objective0 = hinge_objective(params, X, y, l2)
    history = jnp.zeros(epochs)
    state = (params, objective0, history)
    params, _, history = jax.lax.fori_loop(0, epochs, body, state)
    return params, jnp.concatenate([objective0[None], history])


class LinearModel(eqx.Module):
    """A fitted linear classifier

    ``decision_function`` is the margin ``X w + b``. Logistic regression
    scores are probabilities (threshold 0.5); the SVM scores are margins
    (threshold 0).
    """

    weights: Array
    bias: Array
    feature_names: tuple[str, ...] = eqx.field(static=True)
    kind: str = eqx.field(static=True)
    threshold: float = eqx.field(static=True)
    history: Array | None = None

    def decision_function(self, X: Array) -> np.ndarray:
        X = jnp.asarray(X, dtype=jnp.float64).reshape(-1, self.weights.shape[0])
        return np.asarray(_margin((self.weights, self.bias), X))

    def predict_score(self, X: Array) -> np.ndarray:
        margin = self.decision_function(X)
        if self.kind == "LogisticRegression":
            return np.asarray(jax.nn.sigmoid(margin))
        return margin

    def state_dict(self) -> dict:
        return {
            "weights": np.asarray(self.weights).tolist(),
            "bias": float(self.bias),
        }

    @classmethod
    def from_state(
        cls, state: dict, feature_names: Sequence[str], kind: str
    ) -> "LinearModel":
        return cls(
            weights=jnp.asarray(state["weights"], dtype=jnp.float64),
            bias=jnp.asarray(state["bias"], dtype=jnp.float64),
            feature_names=tuple(feature_names),
            kind=kind,
            threshold=0.5 if kind == "LogisticRegression" else 0.0,
        )


def fit_logistic_regression(
    X: np.ndarray,
    y: np.ndarray,
    feature_names: Sequence[str],
    *,
    l2: float = 1e-4,
    max_epochs: int = 500,
    tol: float = 1e-8,
) -> LinearModel:
    w, b = _logistic_descent(
        jnp.asarray(X, dtype=jnp.float64),
        jnp.asarray(y, dtype=jnp.float64),
        l2,
        max_epochs,
        tol,
    )
    return LinearModel(
        weights=w,
        bias=b,
        feature_names=tuple(feature_names),
        kind="LogisticRegression",
        threshold=0.5,
    )


def fit_linear_svm(
    X: np.ndarray,
    y: np.ndarray,
    feature_names: Sequence[str],
    *,
    l2: float = 1e-3,
    epochs: int = 200,
) -> LinearModel:
    """Fit a linear SVM by subgradient descent on the hinge objective

    The objective after every epoch is kept in ``history`` (with the initial
    value first); a step is only taken if it does not increase the objective.
    """
    (w, b), history = _hinge_descent(
        jnp.asarray(X, dtype=jnp.float64),
        jnp.asarray(y, dtype=jnp.float64),
        l2,
        epochs,
    )
    return LinearModel(
        weights=w,
        bias=b,
        feature_names=tuple(feature_names),
        kind="SupportVectorMachine",
        threshold=0.0,
        history=history,
    )
