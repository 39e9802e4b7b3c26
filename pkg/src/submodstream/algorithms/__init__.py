"""The ten cardinality-constrained maximizers.

``make_algorithm(name, objective, K, **params)`` builds any streaming one by
its registry name; Greedy is a plain function since it needs the whole
dataset up front.
"""

from .base import RunReport, SieveBank, StreamingAlgorithm, execute, resolve_m, run_batch, run_stream, sieve_accepts
from .greedy import run_greedy
from .isi import IndependentSetImprovement, run_isi
from .quickstream import QuickStream, quickstream_l, run_quickstream
from .reservoir import RandomReservoir, run_random
from .salsa import Salsa, run_salsa
from .sieve import SieveStreaming, SieveStreamingPP, run_sieve_streaming, run_sieve_streaming_pp
from .swapping import PreemptionStreaming, StreamGreedy, run_preemption, run_stream_greedy
from .three_sieves import ThreeSieves, run_three_sieves

STREAMING = {
    cls.name: cls
    for cls in (
        RandomReservoir,
        IndependentSetImprovement,
        StreamGreedy,
        PreemptionStreaming,
        SieveStreaming,
        SieveStreamingPP,
        Salsa,
        QuickStream,
        ThreeSieves,
    )
}

ALGORITHMS = ("greedy",) + tuple(STREAMING)

# Keyword arguments each constructor accepts beyond (objective, K).
PARAMS = {
    "random": ("seed",),
    "isi": (),
    "stream-greedy": ("nu",),
    "preemption": ("c",),
    "sieve-streaming": ("epsilon", "m_policy"),
    "sieve-streaming-pp": ("epsilon", "m_policy"),
    "salsa": ("epsilon", "m_policy", "length_hint", "rules"),
    "quickstream": ("c", "epsilon", "seed"),
    "three-sieves": ("epsilon", "T", "m_policy"),
}


def is_streaming(name: str) -> bool:
    if name == "greedy":
        return False
    return STREAMING[name].streaming


def make_algorithm(name: str, objective, K: int, **params) -> StreamingAlgorithm:
    """Instantiate a streaming algorithm, ignoring parameters it does not take."""
    if name not in STREAMING:
        raise ValueError(f"unknown streaming algorithm {name!r}; choose from {sorted(STREAMING)}")
    kwargs = {k: v for k, v in params.items() if k in PARAMS[name] and v is not None}
    return STREAMING[name](objective, K, **kwargs)


__all__ = [
    "ALGORITHMS",
    "IndependentSetImprovement",
    "PreemptionStreaming",
    "QuickStream",
    "RandomReservoir",
    "RunReport",
    "Salsa",
    "SieveBank",
    "SieveStreaming",
    "SieveStreamingPP",
    "StreamGreedy",
    "StreamingAlgorithm",
    "ThreeSieves",
    "execute",
    "is_streaming",
    "make_algorithm",
    "quickstream_l",
    "resolve_m",
    "run_batch",
    "run_greedy",
    "run_isi",
    "run_preemption",
    "run_quickstream",
    "run_random",
    "run_salsa",
    "run_sieve_streaming",
    "run_sieve_streaming_pp",
    "run_stream",
    "run_stream_greedy",
    "run_three_sieves",
    "sieve_accepts",
]
