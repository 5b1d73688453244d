"""Deterministic pseudo-random number generation.

Seeded mappings, kernel placement and classification tie draws must
reproduce bit-identically across platforms and library versions, including
after a model round-trips through JSON.  Neither the stdlib nor numpy
guarantee that their generator *streams* stay stable across releases, so
the library pins its own: xoshiro256** seeded through splitmix64, exactly
as specified by Blackman and Vigna (https://prng.di.unimi.it/).

Every generator in the library is an instance of :class:`Xoshiro256StarStar`.
A single user seed yields independent substreams via the ``stream`` argument
(stream 0 drives mapping shuffles and kernel placement, stream 1 drives
tie draws), and the four-word state is plain data, so it serializes into
model documents without loss.
"""

_MASK64 = (1 << 64) - 1


def _splitmix64(state):
    """Advance a splitmix64 state; returns (new_state, output_word)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256StarStar:
    """xoshiro256** with splitmix64 seeding and serializable state.

    Parameters
    ----------
    seed : int
        Any integer; reduced modulo 2**64.
    stream : int
        Substream selector.  Stream ``k`` takes splitmix64 output words
        ``4k .. 4k+3`` as its initial state, so distinct streams from the
        same seed never share state.
    """

    def __init__(self, seed, stream=0):
        sm = int(seed) & _MASK64
        words = []
        for _ in range(4 * (int(stream) + 1)):
            sm, w = _splitmix64(sm)
            words.append(w)
        state = words[-4:]
        if not any(state):
            state[0] = 1  # xoshiro forbids the all-zero state
        self._s = state

    @property
    def state(self):
        """The four 64-bit state words, as a tuple."""
        return tuple(self._s)

    @state.setter
    def state(self, words):
        words = [int(w) & _MASK64 for w in words]
        if len(words) != 4:
            raise ValueError("xoshiro256 state must have exactly 4 words")
        if not any(words):
            raise ValueError("xoshiro256 state must not be all zero")
        self._s = words

    def next_u64(self):
        """Next raw 64-bit output."""
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def randbelow(self, n):
        """Uniform integer in ``[0, n)``, unbiased via rejection."""
        if n <= 0:
            raise ValueError("randbelow() bound must be positive")
        span = _MASK64 + 1
        limit = span - span % n
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def uniform(self):
        """Uniform float64 in ``[0, 1)`` built from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def shuffle(self, items):
        """In-place Fisher-Yates shuffle of a mutable sequence."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def choice(self, items):
        """One element drawn uniformly from a non-empty sequence."""
        return items[self.randbelow(len(items))]
