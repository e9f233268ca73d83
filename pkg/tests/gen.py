"""Random inputs shared by property and acceptance tests."""
import random

from hypothesis import strategies as st

from slk.blowup import P2_GRAM, build_Kn
from slk.lattice import GramMatrix
from slk.mutation import BraidWord, apply_word

QUADRIC = GramMatrix(((1, 2, 2, 4), (0, 1, 0, 2), (0, 0, 1, 2), (0, 0, 0, 1)))
STAR_SEEDS_4 = [QUADRIC] + [build_Kn(n) for n in (0, 1, 2, 4, 5)]
ALL_SEEDS_4 = STAR_SEEDS_4 + [build_Kn(3)]


def tokens(n: int) -> list[str]:
    return ([f"s{i}" for i in range(1, n)] + [f"S{i}" for i in range(1, n)]
            + [f"e{i}" for i in range(1, n + 1)])


def random_word(rng: random.Random, n: int, max_len: int) -> BraidWord:
    return BraidWord.parse(" ".join(rng.choice(tokens(n)) for _ in range(rng.randint(0, max_len))))


def random_star(rng: random.Random, max_len: int = 8) -> GramMatrix:
    """A surface* Gram matrix of rank 3 or 4 from a random walk off a seed."""
    seed = rng.choice([P2_GRAM] + STAR_SEEDS_4)
    return apply_word(seed, random_word(rng, seed.rank, max_len))


def words(n: int, max_size: int = 12):
    return st.lists(st.sampled_from(tokens(n)), max_size=max_size).map(
        lambda t: BraidWord.parse(" ".join(t)))


@st.composite
def star_grams(draw, max_len: int = 8):
    seed = draw(st.sampled_from([P2_GRAM] + STAR_SEEDS_4))
    return apply_word(seed, draw(words(seed.rank, max_len)))


@st.composite
def unitriangular4(draw, lo=-9, hi=9):
    return GramMatrix.from_upper(draw(st.tuples(*[st.integers(lo, hi)] * 6)))
