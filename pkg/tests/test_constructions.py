import pytest

from maxbent.models import FamilyParams
from maxbent.services import constructions, linmaps, vectorial
from maxbent.services.constructions import (
    AlphaNotAdmissible,
    InvalidFamily,
    UnsupportedSubfield,
    build_G,
    no_root_check,
    predicted_nonbent_set,
    verify_bent_alpha_theorem,
)
from maxbent.services.field import ctx_build
from maxbent.utils.enums import PreconditionForm, PredictedKind, Verdict


@pytest.fixture(scope="module")
def f16_generator_of_subfield(f256):
    """A generator of F_16^* inside F_256, hence not a cube there."""
    return f256.power(f256.generator, 17)


def test_build_G_binomial_matches_direct_evaluation(f16, binomial16):
    G = build_G(FamilyParams(k=2, i=1), f16)
    assert G == binomial16
    for x in range(16):
        assert G.table[x] == f16.mul(f16.frob_pow(x, 1), x ^ f16.frob_pow(x, 2))


def test_build_G_with_terms(f64):
    params = FamilyParams(k=3, i=2, e=3, terms=[(1, 1), (1, 2)])
    G = build_G(params, f64)
    for x in (0, 1, 9, 40, 63):
        trace = x ^ f64.frob_pow(x, 3)
        inner = trace ^ f64.frob_pow(trace, 1) ^ f64.frob_pow(trace, 2)
        assert G.table[x] == f64.mul(f64.frob_pow(x, 2), inner)


def test_build_G_with_small_subfield(f16):
    # e = 1: the inner factor is the absolute trace
    G = build_G(FamilyParams(k=2, i=0, e=1), f16)
    assert G.table.tolist() == [x if f16.trace_to(x, 1) else 0 for x in range(16)]


def test_duplicate_terms_merge(f16, binomial16):
    params = constructions.corollary_params(2, 1, 1)
    assert params.has_duplicate_t
    assert params.merged_terms() == []
    assert build_G(params, f16) == binomial16


def test_validate_params(f16, f64):
    with pytest.raises(InvalidFamily, match="needs F_2"):
        build_G(FamilyParams(k=2), f64)
    with pytest.raises(InvalidFamily, match="not in F_2"):
        build_G(FamilyParams(k=2, terms=[(2, 1)]), f16)


def test_no_root_check_without_terms(f256):
    params = FamilyParams(k=4)
    assert no_root_check(f256, PreconditionForm.A, params)
    assert no_root_check(f256, "B", params)


@pytest.mark.parametrize("t", [0, 1, 2])
def test_no_root_check_fails_for_unit_coefficient(f16, t):
    params = FamilyParams(k=2, terms=[(1, t)])
    assert constructions.preconditions_hold(f16, params) == (False, False)


def test_no_root_check_with_non_cube(f256, f16_generator_of_subfield):
    # z^3 misses the non-cubes of F_16, so gamma z^3 + 1 never vanishes
    params = FamilyParams(k=4, i=0, terms=[(f16_generator_of_subfield, 2)])
    assert constructions.preconditions_hold(f256, params) == (True, True)
    assert not no_root_check(f256, PreconditionForm.A, FamilyParams(k=4, terms=[(1, 2)]))


def test_predicted_set_kinds(f16, f64):
    subfield = predicted_nonbent_set(FamilyParams(k=2, i=1), f16)
    assert subfield.kind == PredictedKind.SUBFIELD_K
    assert subfield.as_set() == {0, 1, 6, 7}
    assert 6 in subfield and 2 not in subfield

    even = predicted_nonbent_set(FamilyParams(k=2, e=1), f16)
    assert even.kind == PredictedKind.E_SET
    assert len(even) == 8

    odd = predicted_nonbent_set(FamilyParams(k=3, e=1), f64)
    assert odd.kind == PredictedKind.O_SET
    assert len(odd) == 32


def test_predicted_set_rejects_unsupported_subfield(f64):
    with pytest.raises(UnsupportedSubfield, match="unsupported e"):
        predicted_nonbent_set(FamilyParams(k=3, e=2), f64)


def test_predicted_set_needs_preconditions(f16):
    with pytest.raises(constructions.PreconditionsUnmet):
        predicted_nonbent_set(FamilyParams(k=2, terms=[(1, 1)]), f16)


@pytest.mark.parametrize("k, i, bent_count", [(2, 1, 12), (3, 1, 56), (3, 2, 56), (4, 1, 240)])
def test_bent_alpha_theorem_on_binomials(k, i, bent_count):
    report = verify_bent_alpha_theorem(FamilyParams(k=k, i=i), ctx_build(2 * k))
    assert report.verdict == Verdict.PASS
    assert report.bent_count == bent_count
    assert report.predicted == report.observed_nonbent
    assert report.predicted_kind == PredictedKind.SUBFIELD_K


def test_bent_alpha_theorem_with_terms(f256, f16_generator_of_subfield):
    params = FamilyParams(k=4, i=0, terms=[(f16_generator_of_subfield, 2)])
    report = verify_bent_alpha_theorem(params, f256)
    assert report.precondition_a and report.precondition_b
    assert report.verdict == Verdict.PASS
    assert report.bent_count == 240


def test_bent_alpha_theorem_vacuous_cases(f16, f64):
    unmet = verify_bent_alpha_theorem(FamilyParams(k=2, terms=[(1, 1)]), f16)
    assert unmet.verdict == Verdict.VACUOUS
    assert unmet.observed_nonbent
    unsupported = verify_bent_alpha_theorem(FamilyParams(k=3, e=2), f64)
    assert unsupported.verdict == Verdict.VACUOUS
    assert unsupported.predicted_kind is None


@pytest.mark.parametrize("k", [2, 3])
def test_small_subfield_families_are_never_bent(k):
    # observed: with e = 1 every component is a product of two linear functions
    report = verify_bent_alpha_theorem(FamilyParams(k=k, i=1, e=1), ctx_build(2 * k))
    assert report.bent_count == 0
    assert len(report.observed_nonbent) == 1 << (2 * k)
    assert report.verdict == Verdict.FAIL


def test_duplicate_t_is_flagged(f16):
    report = verify_bent_alpha_theorem(constructions.corollary_params(2, 1, 1), f16)
    assert report.duplicate_t
    assert report.verdict == Verdict.PASS


def test_census_guard_applies(f16):
    with pytest.raises(vectorial.CensusTooLarge):
        verify_bent_alpha_theorem(FamilyParams(k=2, i=1), f16, guard=2)


@pytest.mark.parametrize(
    "params",
    [
        FamilyParams(k=2, i=1),
        FamilyParams(k=2, i=3, e=1),
        FamilyParams(k=3, i=2, terms=[(1, 1), (1, 3)]),
        FamilyParams(k=3, i=0, e=1, terms=[(1, 2)]),
    ],
)
def test_quadratic_linpoly_gives_the_component(params):
    ctx = ctx_build(params.n)
    G = build_G(params, ctx)
    for alpha in (1, 2, 5, ctx.order - 1):
        L = constructions.quadratic_linpoly(params, alpha, ctx)
        assert linmaps.quadratic_form(L) == vectorial.component(G, alpha)


def test_bentness_by_operator_matches_census(f64):
    params = FamilyParams(k=3, i=1)
    predicted = predicted_nonbent_set(params, f64)
    for alpha in range(64):
        check = linmaps.quadform_bent_check(constructions.quadratic_linpoly(params, alpha, f64))
        assert check.agrees
        assert check.bent_by_spectrum == (alpha not in predicted)


def test_subfield_coordinates(f64):
    basis, lookup = constructions.subfield_coordinates(f64, 3)
    assert len(basis) == 3
    members = f64.subfield_elements(3)
    assert sorted(lookup[members].tolist()) == list(range(8))
    assert (lookup >= 0).sum() == 8


@pytest.mark.parametrize("k", [2, 3, 4])
def test_vectorial_lift_is_bent(k):
    ctx = ctx_build(2 * k)
    alpha = next(x for x in range(ctx.order) if not ctx.in_subfield(x, k))
    params = FamilyParams(k=k, i=1)
    lift = constructions.to_vectorial_bent(alpha, build_G(params, ctx), params)
    assert (lift.n, lift.m) == (2 * k, k)
    assert vectorial.is_vectorial_bent(lift)


def test_vectorial_lift_rejects_bad_input(f16, binomial16):
    params = FamilyParams(k=2, i=1)
    with pytest.raises(AlphaNotAdmissible, match="alpha not admissible"):
        constructions.to_vectorial_bent(6, binomial16, params)
    with pytest.raises(UnsupportedSubfield):
        constructions.to_vectorial_bent(2, binomial16, FamilyParams(k=2, i=1, e=1))


def test_enumerate_params_counts():
    params = list(constructions.enumerate_params(2, rho_max=1, gamma_mode="one"))
    # e in {1, 2}, i in {0, 1}, one empty multiset and three single terms
    assert len(params) == 16
    assert len({p.to_spec() for p in params}) == 16
    with_subfield = list(constructions.enumerate_params(2, rho_max=1, gamma_mode="subfield"))
    assert len(with_subfield) == 2 * 2 * (1 + 3 * 3)
    with pytest.raises(ValueError, match="unknown gamma mode"):
        list(constructions.enumerate_params(2, gamma_mode="all"))


def test_binomial_params():
    assert [p.to_spec() for p in constructions.binomial_params(2)] == [f"k=2,i={i},e=2" for i in range(4)]


def test_family_campaign_small():
    report = constructions.run_family_campaign(constructions.enumerate_params(2, rho_max=1, gamma_mode="one"))
    assert report.instances == 16
    assert (report.passed, report.failed, report.vacuous) == (2, 2, 12)
    assert all(",e=1" in label for label in report.findings)
    assert report.verdict == Verdict.FAIL


def test_binomial_campaign_passes():
    report = constructions.run_family_campaign(constructions.binomial_params(3), name="binomial")
    assert report.instances == 4 + 6
    assert report.failed == 0
    assert report.verdict == Verdict.PASS


def test_family_campaign_with_subfield_coefficients():
    # e=2: t in {0, 2} with gamma != 1 passes both checks and scales the binomial, t=1 always has a root
    report = constructions.run_family_campaign(constructions.enumerate_params(2, rho_max=1, gamma_mode="subfield"))
    assert report.instances == 40
    assert (report.passed, report.failed, report.vacuous) == (10, 10, 20)
    assert report.non_vacuous_with_terms == 16
    assert all(FamilyParams.parse(label).e == 1 for label in report.findings)


def test_cancelling_terms_do_not_count_as_terms():
    params = constructions.corollary_params(2, 1, 1)
    assert (params.rho, params.effective_rho) == (2, 0)
    report = constructions.run_family_campaign([params])
    assert report.verdict == Verdict.PASS
    assert report.non_vacuous_with_terms == 0
    assert report.duplicate_t == [params.to_spec()]


@pytest.mark.parametrize(
    "k, i, e, terms",
    [(2, 1, 2, []), (2, 0, 1, []), (3, 2, 3, [(1, 1), (1, 2)]), (3, 1, 1, [(1, 0)])],
)
def test_exponent_i_plus_k_is_conjugate_to_i(k, i, e, terms):
    ctx = ctx_build(2 * k)
    G = build_G(FamilyParams(k=k, i=i, e=e, terms=terms), ctx)
    shifted = FamilyParams(k=k, i=i + k, e=e, terms=terms)
    conjugates = ctx.frob_array(ctx.elements, k)
    assert build_G(shifted, ctx).table[conjugates].tolist() == G.table.tolist()
    low = verify_bent_alpha_theorem(FamilyParams(k=k, i=i, e=e, terms=terms), ctx)
    high = verify_bent_alpha_theorem(shifted, ctx)
    assert high.observed_nonbent == low.observed_nonbent
    assert high.verdict == low.verdict


@pytest.mark.slow
def test_family_campaign_full_subfield():
    report = constructions.run_family_campaign(
        constructions.enumerate_params(4, rho_max=2, gamma_mode="subfield"), workers=4
    )
    for label in report.findings:
        params = FamilyParams.parse(label)
        assert params.e < params.k
    assert report.passed > 0
    assert report.non_vacuous_with_terms >= 1


@pytest.mark.slow
def test_binomial_campaign_through_k4():
    report = constructions.run_family_campaign(constructions.binomial_params(4), name="binomial")
    assert report.instances == 4 + 6 + 8
    assert report.verdict == Verdict.PASS
