"""Hyperparameter optimization front-end.

Adapts the continuous optimizer to the mixed tuning space (integer neuron /
batch / epoch counts, a continuous learning rate, a categorical activation)
and drives an external evaluator process over a line-delimited JSON protocol.
A built-in analytic surrogate objective makes the loop testable without any
external process.

Wire protocol (one JSON object per line over the evaluator's stdin/stdout):

* handshake: the evaluator prints ``{"protocol": 1}`` on startup;
* request:   ``{"trial_id": int, "neurons": int, "learning_rate": float,
  "batch_size": int, "epochs": int, "activation": str}``;
* reply:     ``{"trial_id": int, "fitness": float}`` (lower is better), or
  ``{"trial_id": int, "error": str}`` to mark the trial failed.
"""

from __future__ import annotations

import json
import math
import queue
import shlex
import subprocess
import sys
import threading
import time
from collections import deque
from dataclasses import dataclass

import numpy as np

from agto.core import OptimizerConfig, SearchSpace, run_optimizer

ACTIVATIONS = (
    "relu",
    "sigmoid",
    "softplus",
    "softsign",
    "tanh",
    "selu",
    "elu",
    "exponential",
    "leakyrelu",
    "prelu",
)

DEFAULT_TIMEOUT = 300.0

# Failed trials are recorded with +inf fitness; the optimizer itself only ever
# sees this finite sentinel so its finite-objective contract holds.
_FAILURE_SENTINEL = sys.float_info.max

# Abort threshold: so many failures among the last _WINDOW trials stop the run.
_WINDOW = 20
_WINDOW_FAIL_LIMIT = 10


class EvaluatorError(RuntimeError):
    """A trial could not be evaluated (crash, error reply, or timeout)."""


class ProtocolError(EvaluatorError):
    """The evaluator violated the wire protocol."""


class HpoRunError(RuntimeError):
    """The tuning run was aborted (persistent evaluator failures)."""


@dataclass(frozen=True)
class HyperparameterSpace:
    """Tuning ranges; integer ranges are inclusive."""

    neurons: tuple = (10, 100)
    learning_rate: tuple = (0.01, 1.0)
    batch_size: tuple = (200, 1000)
    epochs: tuple = (2, 100)
    activations: tuple = ACTIVATIONS


@dataclass(frozen=True)
class TrialParams:
    neurons: int
    learning_rate: float
    batch_size: int
    epochs: int
    activation: str


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    params: TrialParams
    fitness: float
    wall_time: float


def _round_half_away(value: float) -> int:
    if value >= 0.0:
        return math.floor(value + 0.5)
    return math.ceil(value - 0.5)


def _clamp_int(value: int, bounds) -> int:
    return min(max(value, bounds[0]), bounds[1])


def decode(position, space: HyperparameterSpace = HyperparameterSpace()) -> TrialParams:
    """Decode one continuous position into concrete trial parameters.

    Integer genes round half away from zero and clamp into range; the
    learning rate passes through; the activation gene floors to a category
    index (clamped to the last category at the upper boundary).
    """
    position = np.asarray(position, dtype=float)
    if position.shape != (5,):
        raise ValueError(f"expected a 5-gene position, got shape {position.shape}")
    index = min(max(int(math.floor(position[4])), 0), len(space.activations) - 1)
    return TrialParams(
        neurons=_clamp_int(_round_half_away(position[0]), space.neurons),
        learning_rate=float(position[1]),
        batch_size=_clamp_int(_round_half_away(position[2]), space.batch_size),
        epochs=_clamp_int(_round_half_away(position[3]), space.epochs),
        activation=space.activations[index],
    )


def as_search_space(space: HyperparameterSpace = HyperparameterSpace()) -> SearchSpace:
    """Continuous relaxation of the tuning space.

    The activation gene spans [0, n_categories] so that flooring gives every
    category an equal share of the uniform measure.
    """
    return SearchSpace(
        lower=np.array(
            [space.neurons[0], space.learning_rate[0], space.batch_size[0], space.epochs[0], 0.0]
        ),
        upper=np.array(
            [
                space.neurons[1],
                space.learning_rate[1],
                space.batch_size[1],
                space.epochs[1],
                float(len(space.activations)),
            ]
        ),
    )


# Distinct penalty per activation; tanh is the unique best category.
_ACTIVATION_PENALTY = {
    "tanh": 0.0,
    "relu": 1.0,
    "leakyrelu": 1.1,
    "softsign": 1.2,
    "elu": 1.3,
    "softplus": 1.4,
    "prelu": 1.5,
    "selu": 1.6,
    "sigmoid": 1.7,
    "exponential": 1.8,
}


def surrogate_objective(params: TrialParams) -> float:
    """Deterministic analytic stand-in for an expensive training loss.

    Separable smooth bowls over the normalized coordinates

        un = (neurons - 55) / 90        ul = log10(learning_rate / 0.1)
        ub = (batch_size - 600) / 800   ue = (epochs - 50) / 98

    summed as ``un^2 + ul^2 + ub^2 + ue^2``, plus a per-activation penalty
    (0 for tanh, distinct values >= 1 otherwise). Each activation slice keeps
    its own continuous minimum, so the full mixed-space function has ten
    isolated local minima; the unique global minimum is 0 at
    (neurons=55, learning_rate=0.1, batch_size=600, epochs=50, tanh).
    """
    un = (params.neurons - 55.0) / 90.0
    ul = math.log10(params.learning_rate / 0.1)
    ub = (params.batch_size - 600.0) / 800.0
    ue = (params.epochs - 50.0) / 98.0
    return un * un + ul * ul + ub * ub + ue * ue + _ACTIVATION_PENALTY[params.activation]


class SurrogateEvaluator:
    """In-process evaluator backed by :func:`surrogate_objective`."""

    def evaluate(self, trial_id: int, params: TrialParams) -> float:
        del trial_id
        return surrogate_objective(params)

    def close(self):
        pass


class SubprocessEvaluator:
    """Client owning an external evaluator process.

    Launches the configured command line, verifies the ``{"protocol": 1}``
    handshake, then exchanges one request/reply line per trial. A dead or
    unresponsive process is killed and relaunched on the next call, so a
    single crash costs only the affected trial.
    """

    def __init__(self, command, timeout: float = DEFAULT_TIMEOUT):
        if isinstance(command, str):
            command = shlex.split(command)
        self.command = list(command)
        self.timeout = float(timeout)
        self._proc = None
        self._lines = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _launch(self):
        self._proc = subprocess.Popen(
            self.command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        self._lines = queue.Queue()

        def pump(proc, sink):
            for line in proc.stdout:
                sink.put(line)
            sink.put(None)  # EOF marker

        threading.Thread(target=pump, args=(self._proc, self._lines), daemon=True).start()
        handshake = self._read_line()
        try:
            payload = json.loads(handshake)
        except json.JSONDecodeError as exc:
            self._kill()
            raise ProtocolError(f"bad handshake line: {handshake!r}") from exc
        if payload.get("protocol") != 1:
            self._kill()
            raise ProtocolError(f"unsupported protocol announcement: {payload!r}")

    def _read_line(self) -> str:
        try:
            line = self._lines.get(timeout=self.timeout)
        except queue.Empty:
            self._kill()
            raise EvaluatorError(f"evaluator timed out after {self.timeout}s")
        if line is None:
            self._kill()
            raise EvaluatorError("evaluator exited unexpectedly")
        return line

    def _kill(self):
        if self._proc is not None:
            self._proc.kill()
            self._proc.wait()
            self._proc = None

    def _ensure_alive(self):
        if self._proc is None or self._proc.poll() is not None:
            self._kill()
            self._launch()

    def evaluate(self, trial_id: int, params: TrialParams) -> float:
        self._ensure_alive()
        request = {
            "trial_id": trial_id,
            "neurons": params.neurons,
            "learning_rate": params.learning_rate,
            "batch_size": params.batch_size,
            "epochs": params.epochs,
            "activation": params.activation,
        }
        try:
            self._proc.stdin.write(json.dumps(request) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            self._kill()
            raise EvaluatorError("evaluator pipe is broken") from exc
        line = self._read_line()
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"malformed reply line: {line!r}") from exc
        if reply.get("trial_id") != trial_id:
            raise ProtocolError(f"reply for wrong trial: {reply!r}")
        if "error" in reply:
            raise EvaluatorError(f"evaluator reported failure: {reply['error']}")
        try:
            fitness = float(reply["fitness"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"reply without usable fitness: {reply!r}") from exc
        if not math.isfinite(fitness):
            raise ProtocolError(f"non-finite fitness in reply: {reply!r}")
        return fitness

    def close(self):
        if self._proc is not None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
            try:
                self._proc.wait(timeout=5.0)
            except subprocess.TimeoutExpired:
                self._kill()
            self._proc = None


def run_hpo(
    space: HyperparameterSpace,
    evaluator,
    cfg: OptimizerConfig,
) -> tuple:
    """Tune over ``space`` with the troop optimizer driving ``evaluator``.

    Every distinct decoded trial is evaluated at most once: repeats hit an
    in-memory cache without touching the evaluator. A failing trial is retried
    once, then recorded with +inf fitness; the run aborts when at least half
    of the last 20 trials failed. Returns ``(best, history)`` where history
    is ordered by trial id.
    """
    cache: dict = {}
    history: list = []
    outcomes = deque(maxlen=_WINDOW)

    def objective(position):
        params = decode(position, space)
        cached = cache.get(params)
        if cached is not None:
            return cached
        trial_id = len(history)
        started = time.perf_counter()
        failed = False
        try:
            fitness = evaluator.evaluate(trial_id, params)
        except EvaluatorError:
            try:
                fitness = evaluator.evaluate(trial_id, params)
            except EvaluatorError:
                failed = True
                fitness = math.inf
        wall = time.perf_counter() - started
        history.append(TrialRecord(trial_id, params, fitness, wall))
        outcomes.append(failed)
        if len(outcomes) == _WINDOW and sum(outcomes) >= _WINDOW_FAIL_LIMIT:
            raise HpoRunError(
                f"{sum(outcomes)} of the last {_WINDOW} trials failed; aborting"
            )
        value = _FAILURE_SENTINEL if failed else fitness
        cache[params] = value
        return value

    run_optimizer(objective, as_search_space(space), cfg)
    if not history:
        raise HpoRunError("no trials were evaluated")
    best = min(history, key=lambda record: (record.fitness, record.trial_id))
    return best, history
