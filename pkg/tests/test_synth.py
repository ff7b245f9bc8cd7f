import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cancelmin.models.template import TemplateKind
from cancelmin.services.generator import SecureGenerator, SeededGenerator, derive_seed
from cancelmin.services.synth_service import synthesize, synthesize_from_seed
from cancelmin.utils.constants import ROLE_FINGER, ROLE_IMPRESSION, ROLE_ST, ROLE_ST_DIVERSITY
from cancelmin.utils.errors import ContractError


def test_next_uniform_single_outcome():
    g = SeededGenerator(42)
    assert [g.next_uniform(1) for _ in range(20)] == [0] * 20


def test_next_uniform_is_reproducible():
    first = SeededGenerator(42)
    second = SeededGenerator(42)
    assert [first.next_uniform(360) for _ in range(3)] == [second.next_uniform(360) for _ in range(3)]


def test_next_uniform_rejects_empty_range():
    with pytest.raises(ContractError):
        SeededGenerator(1).next_uniform(0)


@pytest.mark.parametrize("seed", [-1, 2 ** 64])
def test_seed_must_fit_64_bits(seed):
    with pytest.raises(ContractError):
        SeededGenerator(seed)


def test_next_uniform_buckets_are_balanced():
    g = SeededGenerator(2024)
    draws = 200_000
    counts = np.bincount([g.next_uniform(10) for _ in range(draws)], minlength=10)
    expected = draws / 10
    sigma = (draws * 0.1 * 0.9) ** 0.5
    assert len(counts) == 10
    assert np.all(np.abs(counts - expected) < 5 * sigma)


@given(st.integers(0, 2 ** 64 - 1), st.integers(1, 2 ** 64))
@settings(max_examples=50)
def test_next_uniform_stays_in_range(seed, n):
    assert 0 <= SeededGenerator(seed).next_uniform(n) < n


def test_secure_generator_shares_interface():
    g = SecureGenerator()
    assert 0 <= g.seed < 2 ** 64
    assert all(0 <= g.next_uniform(7) < 7 for _ in range(50))
    st_ = synthesize(g, 64, 64, 20)
    assert len(st_) == 20
    assert st_.provenance.st_seed == g.seed


@given(st.integers(0, 2 ** 64 - 1))
@settings(max_examples=20)
def test_seed_is_always_a_plain_int(seed):
    assert type(SeededGenerator(seed).seed) is int
    assert type(SecureGenerator().seed) is int


def test_derive_seed_is_deterministic_and_sensitive():
    base = derive_seed(42, 3, 200, ROLE_ST)
    assert base == derive_seed(42, 3, 200, ROLE_ST)
    assert base != derive_seed(43, 3, 200, ROLE_ST)
    assert base != derive_seed(42, 4, 200, ROLE_ST)
    assert base != derive_seed(42, 3, 201, ROLE_ST)
    assert base != derive_seed(42, 3, 200, ROLE_ST_DIVERSITY)


def test_derive_seed_has_no_collision_on_acceptance_grid():
    seeds = set()
    count = 0
    for finger in range(50):
        for n in (50, 100, 150, 200, 500, 2000):
            for role in (ROLE_ST, ROLE_ST_DIVERSITY):
                seeds.add(derive_seed(2024, finger, n, role))
                count += 1
        seeds.add(derive_seed(2024, finger, ROLE_FINGER))
        count += 1
        for impression in range(4):
            seeds.add(derive_seed(2024, finger, impression, ROLE_IMPRESSION))
            count += 1
    assert len(seeds) == count


def test_derive_seed_rejects_negative_components():
    with pytest.raises(ContractError):
        derive_seed(1, -1)


def test_synthesize_empty():
    template = synthesize_from_seed(7, 640, 480, 0)
    assert len(template) == 0
    assert template.kind == TemplateKind.SYNTHETIC


def test_synthesize_is_deterministic():
    assert synthesize_from_seed(7, 640, 480, 200) == synthesize_from_seed(7, 640, 480, 200)


def test_distinct_seeds_give_distinct_templates():
    first = synthesize_from_seed(7, 640, 480, 200)
    second = synthesize_from_seed(8, 640, 480, 200)
    assert first.minutiae != second.minutiae
    assert first.minutia_set() != second.minutia_set()


def test_synthesize_records_seed_and_size():
    template = synthesize_from_seed(7, 640, 480, 200)
    assert template.provenance.st_seed == 7
    assert template.provenance.st_size == 200
    assert template.generation == 0


@given(st.integers(0, 2 ** 64 - 1), st.integers(1, 40), st.integers(1, 40), st.integers(0, 300))
@settings(max_examples=50, deadline=None)
def test_synthesize_bounds_and_distinctness(seed, width, height, n):
    template = synthesize_from_seed(seed, width, height, n)
    assert len(template) == n
    assert len(template.minutia_set()) == n
    assert all(0 <= m.x < width and 0 <= m.y < height and 0 <= m.theta < 360 for m in template)


def test_synthesize_fills_the_whole_lattice():
    template = synthesize_from_seed(5, 1, 1, 360)
    assert sorted(m.theta for m in template) == list(range(360))


@pytest.mark.parametrize("width, height, n", [(1, 1, 361), (0, 480, 1), (640, 0, 1), (640, 480, -1)])
def test_synthesize_contract_errors(width, height, n):
    with pytest.raises(ContractError):
        synthesize_from_seed(7, width, height, n)
