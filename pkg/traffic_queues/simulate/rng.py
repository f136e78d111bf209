"""Reproducible random streams.

Each stream is numpy's Philox4x64-10 counter-based generator keyed through a
``SeedSequence`` with ``entropy=seed`` and ``spawn_key=(stream_id,)``. The
algorithm is pinned here; changing it changes every stored result.
"""

import numpy as np

from traffic_queues.simulate.models import RngStream


GENERATOR_NAME = 'Philox4x64-10/SeedSequence'


def make_generator(stream: RngStream) -> np.random.Generator:
    """Build the generator for a stream key."""
    seq = np.random.SeedSequence(entropy=stream.seed, spawn_key=(stream.stream_id,))
    return np.random.Generator(np.random.Philox(seq))
