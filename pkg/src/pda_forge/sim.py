"""Delivery simulation over synthetic file libraries.

Files are split into F packets of opaque bytes and coded with XOR, so a
decode check is byte-exact equality.  The flat protocol serves a PDA: the
server sends one XOR signal per integer value, and a user recovers each
missing packet by cancelling cached packets out of the matching signal
(the cross-star condition C3(b) guarantees every cancellation hits the
cache).  The hierarchical protocol serves an HPDA: the server sends one
signal per integer outside Sm; each mirror re-codes the signals for its
own integers by XOR-ing out foreign packets it caches, and serves its
Sm integers entirely from its own cache.

The simulator re-derives every cancellation from the grids rather than
trusting construction metadata, so a successful run independently
witnesses the array conditions; a cache miss during decode means the
array was invalid or the simulator is wrong, and raises.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .hpda import Hpda, hpda_loads, verify_hpda
from .pda import STAR, Pda, verify_pda


class SimulationError(RuntimeError):
    """A decode step needed a packet that is not in the decoder's cache."""


@dataclass(frozen=True)
class FileLibrary:
    """n_files files, each packets_per_file packets of packet_bytes bytes."""

    n_files: int
    packets_per_file: int
    packet_bytes: int
    packets: tuple  # packets[n][j] -> bytes

    @classmethod
    def generate(cls, n_files: int, packets_per_file: int, *,
                 packet_bytes: int = 64, seed: int = 0) -> "FileLibrary":
        rng = random.Random(seed)
        packets = tuple(
            tuple(rng.randbytes(packet_bytes) for _ in range(packets_per_file))
            for _ in range(n_files))
        return cls(n_files=n_files, packets_per_file=packets_per_file,
                   packet_bytes=packet_bytes, packets=packets)

    def packet(self, n: int, j: int) -> bytes:
        return self.packets[n][j]

    def file_bytes(self, n: int) -> bytes:
        return b"".join(self.packets[n])


def _xor(a: bytes, b: bytes) -> bytes:
    if len(a) != len(b):
        raise SimulationError("packet length mismatch")
    return bytes(x ^ y for x, y in zip(a, b))


def random_flat_demand(K: int, n_files: int, seed: int) -> tuple:
    rng = random.Random(seed)
    return tuple(rng.randrange(n_files) for _ in range(K))


def random_hier_demand(K1: int, K2: int, n_files: int, seed: int) -> tuple:
    rng = random.Random(seed)
    return tuple(tuple(rng.randrange(n_files) for _ in range(K2))
                 for _ in range(K1))


@dataclass(frozen=True)
class SimReport:
    transmissions: int
    decoded_ok: tuple
    mirror_transmissions: tuple = None  # hierarchical only
    measured_R: Fraction = None         # flat only
    measured_R1: Fraction = None        # hierarchical only
    measured_R2: Fraction = None
    coding_delay_serial: Fraction = None
    coding_delay_parallel: Fraction = None
    trace: tuple = None

    @property
    def all_decoded(self) -> bool:
        def flat(items):
            for item in items:
                if isinstance(item, tuple):
                    yield from flat(item)
                else:
                    yield item
        return all(flat(self.decoded_ok))


def run_flat(p: Pda, lib: FileLibrary, demand, *, trace: bool = False) -> SimReport:
    """Run the flat delivery protocol and check every user's decode."""
    report = verify_pda(p)
    if not report.ok:
        raise ValueError("run_flat requires an array with no violations")
    if lib.packets_per_file != p.F:
        raise ValueError(f"library has {lib.packets_per_file} packets per "
                         f"file, array needs F={p.F}")
    demand = tuple(demand)
    if len(demand) != p.K:
        raise ValueError(f"demand must list {p.K} file indices, "
                         f"got {len(demand)}")
    if any(not 0 <= d < lib.n_files for d in demand):
        raise ValueError("demand index out of range")

    zero = bytes(lib.packet_bytes)
    by_value = p.positions_by_value()
    signals = {}
    trace_log = [] if trace else None
    for s in sorted(by_value):
        signal = zero
        for (j, k) in by_value[s]:
            signal = _xor(signal, lib.packet(demand[k], j))
        signals[s] = signal
        if trace:
            trace_log.append({"layer": "server", "s": s,
                              "cells": tuple(by_value[s])})

    decoded_ok = []
    for k in range(p.K):
        file_parts = []
        ok = True
        for j in range(p.F):
            cell = p.grid[j][k]
            if cell is STAR:
                file_parts.append(lib.packet(demand[k], j))  # cached
                continue
            recovered = signals[cell]
            for (j2, k2) in by_value[cell]:
                if (j2, k2) == (j, k):
                    continue
                if p.grid[j2][k] is not STAR:
                    raise SimulationError(
                        f"user {k} cannot cancel packet (file {demand[k2]}, "
                        f"packet {j2}): cell ({j2},{k}) is not a star")
                recovered = _xor(recovered, lib.packet(demand[k2], j2))
            file_parts.append(recovered)
            ok = ok and recovered == lib.packet(demand[k], j)
        decoded_ok.append(ok and b"".join(file_parts)
                          == lib.file_bytes(demand[k]))

    s_total = len(by_value)
    return SimReport(
        transmissions=s_total,
        decoded_ok=tuple(decoded_ok),
        measured_R=Fraction(s_total, p.F),
        trace=tuple(trace_log) if trace else None,
    )


def run_hierarchical(q: Hpda, lib: FileLibrary, demand, *,
                     trace: bool = False) -> SimReport:
    """Run the two-layer delivery protocol and check every user's decode."""
    report = verify_hpda(q)
    if not report.ok:
        raise ValueError("run_hierarchical requires an array with no "
                         "violations")
    if lib.packets_per_file != q.F:
        raise ValueError(f"library has {lib.packets_per_file} packets per "
                         f"file, array needs F={q.F}")
    demand = tuple(tuple(row) for row in demand)
    if len(demand) != q.K1 or any(len(row) != q.K2 for row in demand):
        raise ValueError(f"demand must be a {q.K1}x{q.K2} matrix")
    if any(not 0 <= d < lib.n_files for row in demand for d in row):
        raise ValueError("demand index out of range")

    zero = bytes(lib.packet_bytes)
    by_value = q.positions_by_value()
    sub_sets = q.sub_integer_sets()
    server_set = sorted(frozenset().union(*sub_sets) - q.sm)
    trace_log = [] if trace else None

    # server phase: one signal per integer outside Sm, XOR over all
    # subarray cells holding it
    server_signals = {}
    for s in server_set:
        signal = zero
        for (k1, j, k2) in by_value[s]:
            signal = _xor(signal, lib.packet(demand[k1][k2], j))
        server_signals[s] = signal
        if trace:
            trace_log.append({"layer": "server", "s": s,
                              "cells": tuple(by_value[s])})

    # mirror phase
    mirror_signals = []  # per k1: s -> bytes
    for k1 in range(q.K1):
        signals = {}
        for s in sorted(sub_sets[k1]):
            if s in q.sm:
                # served from the mirror cache alone; B3 guarantees the
                # mirror caches every packet involved
                signal = zero
                cells = []
                for (k1p, j, k2p) in by_value[s]:
                    if k1p != k1:
                        raise SimulationError(
                            f"integer {s} in Sm leaked into subarray {k1p}")
                    if not q.q0[j][k1]:
                        raise SimulationError(
                            f"mirror {k1} does not cache packet {j} needed "
                            f"for its own integer {s}")
                    signal = _xor(signal, lib.packet(demand[k1p][k2p], j))
                    cells.append((k1p, j, k2p))
            else:
                # re-code the server signal: XOR out the foreign packets
                # this mirror caches; if it caches none, forward unchanged
                signal = server_signals[s]
                cells = []
                for (k1p, j, k2p) in by_value[s]:
                    if k1p != k1 and q.q0[j][k1]:
                        signal = _xor(signal, lib.packet(demand[k1p][k2p], j))
                        cells.append((k1p, j, k2p))
            signals[s] = signal
            if trace:
                trace_log.append({"layer": "mirror", "k1": k1, "s": s,
                                  "cells": tuple(cells)})
        mirror_signals.append(signals)

    # decode check per user
    decoded_ok = []
    for k1 in range(q.K1):
        row_ok = []
        for k2 in range(q.K2):
            want = demand[k1][k2]
            file_parts = []
            ok = True
            for j in range(q.F):
                cell = q.subs[k1][j][k2]
                if cell is STAR:
                    file_parts.append(lib.packet(want, j))  # cached
                    continue
                recovered = mirror_signals[k1][cell]
                for (k1p, j2, k2p) in by_value[cell]:
                    if (k1p, j2, k2p) == (k1, j, k2):
                        continue
                    if k1p != k1 and q.q0[j2][k1]:
                        continue  # the mirror already cancelled this one
                    if q.subs[k1][j2][k2] is not STAR:
                        raise SimulationError(
                            f"user ({k1},{k2}) cannot cancel packet "
                            f"(file {demand[k1p][k2p]}, packet {j2}): cell "
                            f"({j2},{k2}) of subarray {k1} is not a star")
                    recovered = _xor(recovered, lib.packet(demand[k1p][k2p], j2))
                file_parts.append(recovered)
                ok = ok and recovered == lib.packet(want, j)
            row_ok.append(ok and b"".join(file_parts) == lib.file_bytes(want))
        decoded_ok.append(tuple(row_ok))

    loads = hpda_loads(q)
    return SimReport(
        transmissions=len(server_set),
        decoded_ok=tuple(decoded_ok),
        mirror_transmissions=tuple(len(sub_sets[k1]) for k1 in range(q.K1)),
        measured_R1=Fraction(len(server_set), q.F),
        measured_R2=Fraction(max(len(s) for s in sub_sets), q.F),
        coding_delay_serial=loads.R1 + loads.R2,
        coding_delay_parallel=max(loads.R1, loads.R2),
        trace=tuple(trace_log) if trace else None,
    )
