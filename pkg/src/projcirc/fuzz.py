"""Random circuit generators for property-based testing.

``fuzz_circuit`` produces arbitrary multi-homogeneous circuits (sums are
always degree-uniform by drawing from per-degree buckets); the embeddable
variant yields normalized circuits sized for the universal-circuit
embedding tests, together with matching universal parameters.
"""

from __future__ import annotations

import random

from .circuit import BlockSpec, Circuit, CircuitBuilder, validate
from .field import FieldDescriptor
from .normal_form import normalize


def _random_weight(rng: random.Random, field: FieldDescriptor):
    if rng.random() < 0.08:
        return 0
    if field.is_prime_field:
        return rng.randrange(1, field.modulus)
    num = rng.randint(-6, 6) or 1
    den = rng.randint(1, 4)
    return field.elem(f"{num}/{den}").value


def fuzz_circuit(
    seed: int,
    field: FieldDescriptor,
    max_block_vars: int = 4,
    nblocks: int = 2,
    max_degree: int = 4,
    max_size: int = 40,
    max_outputs: int = 3,
) -> Circuit:
    """A random homogeneous circuit within the given budget (size = edges)."""
    rng = random.Random(seed)
    counts = [rng.randint(1, max_block_vars) for _ in range(nblocks)]
    blocks = BlockSpec.of(*((f"b{i}" if nblocks > 2 else "xy"[i], c) for i, c in enumerate(counts)))
    b = CircuitBuilder(blocks, field)
    buckets: dict = {}
    for blk in range(nblocks):
        d = tuple(1 if i == blk else 0 for i in range(nblocks))
        for i in range(counts[blk]):
            buckets.setdefault(d, []).append(b.var(blk, i))
    size = 0
    internal = []
    while True:
        if rng.random() < 0.55:
            deg = rng.choice(list(buckets))
            k = rng.randint(1, 3)
            if size + k > max_size:
                break
            terms = [(_random_weight(rng, field), rng.choice(buckets[deg])) for _ in range(k)]
            g = b.add_sum(terms)
        else:
            d1 = rng.choice(list(buckets))
            room = max_degree - sum(d1)
            options = [d for d in buckets if 0 < sum(d) <= room]
            if not options or size + 2 > max_size:
                if size + 1 > max_size:
                    break
                g = b.add_sum([(_random_weight(rng, field), rng.choice(buckets[d1]))])
                deg = d1
                buckets.setdefault(deg, []).append(g)
                internal.append((g, deg))
                size += 1
                continue
            d2 = rng.choice(options)
            deg = tuple(a + c for a, c in zip(d1, d2))
            g = b.add_prod([
                (_random_weight(rng, field), rng.choice(buckets[d1])),
                (_random_weight(rng, field), rng.choice(buckets[d2])),
            ])
            k = 2
        buckets.setdefault(deg, []).append(g)
        internal.append((g, deg))
        size += k
        if size >= max_size:
            break
    if not internal:
        g = b.add_sum([(1, 0)])
        internal.append((g, tuple(1 if i == 0 else 0 for i in range(nblocks))))
    outs = [rng.choice(internal)[0] for _ in range(rng.randint(1, max_outputs))]
    b.set_outputs(outs)
    return b.build()


def fuzz_embeddable(seed: int, field: FieldDescriptor):
    """(normalized circuit, universal parameters (n, m, r, s)) sized so the
    circuit embeds into build_universal_alldeg(n, m, r, s)."""
    raw = fuzz_circuit(
        seed, field, max_block_vars=3, nblocks=2, max_degree=3, max_size=24, max_outputs=2
    )
    c = normalize(raw)
    report = validate(c)
    mult: dict = {}
    for d in report.output_degrees:
        mult[d] = mult.get(d, 0) + 1
    n = max(c.blocks.counts[0], max(mult.values()))
    m = c.blocks.counts[1]
    r = max(max(d) for d in report.output_degrees)
    s = max(c.size, n + m)
    return c, (n, m, r, s)
