from typing import Annotated, Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, field_validator, model_validator

from maxbent import __version__
from maxbent.utils import enums


def _parse_int(value: Any) -> Any:
    # Accept "0x1f", "0b101" and decimal strings wherever an element is expected
    if isinstance(value, str):
        return int(value.strip(), 0)
    return value


# Field elements travel as hex strings in reports
HexInt = Annotated[int, BeforeValidator(_parse_int), PlainSerializer(lambda v: f"{v:#x}", return_type=str)]


class ReportModel(BaseModel):
    """Base for all reports; field declaration order is the JSON key order."""

    model_config = ConfigDict(populate_by_name=True, use_enum_values=True)


class ReportHeader(ReportModel):
    tool: str = "maxbent"
    version: str = __version__
    command: str
    field: Optional[str] = None
    poly: Optional[HexInt] = None
    seed: Optional[int] = None
    function: Optional[str] = None


# === Family parameters ===


class FamilyParams(BaseModel):
    """
    G(x) = x^(2^i) * (Tr^{2k}_e(x) + sum_j g_j * Tr^{2k}_e(x)^(2^t_j)) on F_{2^{2k}}.

    Only structural checks live here; membership of g_j in F_{2^k} needs a field and is
    checked by the constructions module.
    """

    k: int = Field(ge=1)
    i: int = Field(default=0, ge=0)
    e: Optional[int] = None
    terms: List[Tuple[HexInt, int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_structure(self):
        if self.e is None:
            self.e = self.k
        if self.e < 1 or (2 * self.k) % self.e:
            raise ValueError(f"e={self.e} must divide 2k={2 * self.k}")
        if self.i >= 2 * self.k:
            raise ValueError(f"i={self.i} must be below 2k={2 * self.k}")
        if len(self.terms) > self.k:
            raise ValueError(f"at most k={self.k} terms allowed, got {len(self.terms)}")
        for gamma, t in self.terms:
            if not 0 <= t <= self.k:
                raise ValueError(f"term exponent t={t} outside [0, {self.k}]")
            if gamma < 0:
                raise ValueError("term coefficients must be non-negative encodings")
        return self

    @property
    def n(self) -> int:
        return 2 * self.k

    @property
    def rho(self) -> int:
        return len(self.terms)

    @property
    def effective_rho(self) -> int:
        """Terms left after merging equal t; 0 means G is the plain binomial."""
        return len(self.merged_terms())

    @property
    def has_duplicate_t(self) -> bool:
        ts = [t for _, t in self.terms]
        return len(ts) != len(set(ts))

    def merged_terms(self) -> List[Tuple[int, int]]:
        """Terms with equal t collapsed by XOR of their coefficients; zero coefficients dropped."""
        merged: Dict[int, int] = {}
        for gamma, t in self.terms:
            merged[t] = merged.get(t, 0) ^ gamma
        return [(gamma, t) for t, gamma in sorted(merged.items()) if gamma]

    def to_spec(self) -> str:
        spec = f"k={self.k},i={self.i},e={self.e}"
        if self.terms:
            spec += ",terms=" + ";".join(f"{gamma:#x}:{t}" for gamma, t in self.terms)
        return spec

    @classmethod
    def parse(cls, text: str) -> "FamilyParams":
        """Parse "k=2,i=1,e=2,terms=0x1:1;0x3:2" (terms optional)."""
        values: Dict[str, Any] = {}
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise ValueError(f"malformed family parameter '{part}'")
            key, value = (s.strip() for s in part.split("=", 1))
            if key == "terms":
                values["terms"] = [tuple(term.split(":")) for term in value.split(";") if term.strip()]
            elif key in ("k", "i", "e"):
                values[key] = int(value, 0)
            else:
                raise ValueError(f"unknown family parameter '{key}'")
        if "terms" in values:
            values["terms"] = [(_parse_int(g), int(t)) for g, t in values["terms"]]
        return cls(**values)


# === Vectorial reports ===


class CensusReport(ReportModel):
    n: int
    bent_count: int
    nonbent_set: List[HexInt] = Field(serialization_alias="nonbent")
    is_subspace: bool
    is_max: bool


class SampledCensusReport(ReportModel):
    n: int
    sample_size: int
    seed: int
    bent_in_sample: int
    estimated_bent_count: int
    estimate_only: bool = True


class AmplitudeHistogram(ReportModel):
    n: int
    counts: Dict[int, int]

    @property
    def weighted_sum(self) -> int:
        """sum_t N_t 2^t; equals 3*2^n - 2 for APN plateaued functions."""
        return sum(count << t for t, count in self.counts.items())

    def __getitem__(self, t: int) -> int:
        return self.counts.get(t, 0)


class ApnExclusionReport(ReportModel):
    n: int
    delta: int
    is_apn: bool
    is_vectorial_plateaued: bool
    histogram: Dict[int, int]
    n0: int
    n0_mod4: int
    weighted_sum: Optional[int] = None
    fourth_moment: int
    is_max: bool
    verdict: enums.Verdict


class AnalyzeReport(ReportModel):
    n: int
    m: int
    delta: int
    is_apn: bool
    is_permutation: bool
    nonlinearity: int
    census: Optional[CensusReport] = None
    histogram: Optional[Dict[int, int]] = None
    fourth_moment: Optional[int] = None


# === Differential reports ===


class DeltaRow(ReportModel):
    a: HexInt
    histogram: Dict[int, int]
    support: List[HexInt]
    witnesses: Dict[int, HexInt] = Field(default_factory=dict, description="delta value -> first b attaining it")

    @property
    def row_sum(self) -> int:
        return sum(value * count for value, count in self.histogram.items())

    @property
    def max_delta(self) -> int:
        return max(self.histogram)


class DifferentialSpectrum(ReportModel):
    n: int
    delta: int
    is_apn: bool
    counts: Dict[int, int]


class BinomialSpectrumReport(ReportModel):
    k: int
    i: int
    gcd_value: int
    rows_checked: int
    peak_only_on_subfield: bool
    violations: List[str] = Field(default_factory=list)
    verdict: enums.Verdict


class AnomalyReport(ReportModel):
    theorem: enums.Theorem
    k: int
    i: int
    ts: List[int]
    preconditions_hold: bool
    root_count: Optional[int] = None
    excluded_values: List[int] = Field(default_factory=list)
    witness_a: Optional[HexInt] = None
    witness_b: Dict[int, HexInt] = Field(default_factory=dict)
    verdict: enums.Verdict


# === Construction reports ===


class AlphaTheoremReport(ReportModel):
    params: str
    n: int
    precondition_a: bool
    precondition_b: bool
    predicted_kind: Optional[enums.PredictedKind] = None
    predicted: List[HexInt] = Field(default_factory=list)
    observed_nonbent: List[HexInt] = Field(default_factory=list)
    bent_count: int
    duplicate_t: bool = False
    verdict: enums.Verdict


class ConstructReport(ReportModel):
    params: str
    n: int
    precondition_a: bool
    precondition_b: bool
    predicted_kind: Optional[enums.PredictedKind] = None
    predicted_size: Optional[int] = None
    census: CensusReport
    alpha: Optional[HexInt] = None
    lift_m: Optional[int] = None
    lift_bent_components: Optional[int] = None
    lift_is_vectorial_bent: Optional[bool] = None


class Lemma1Report(ReportModel):
    n: int
    trials: int
    seed: int
    bent_count: int
    disagreements: int
    verdict: enums.Verdict


class CampaignReport(ReportModel):
    campaign: str
    instances: int = 0
    passed: int = 0
    failed: int = 0
    vacuous: int = 0
    non_vacuous_with_terms: int = 0
    duplicate_t: List[str] = Field(default_factory=list)
    findings: List[str] = Field(default_factory=list)
    verdict: enums.Verdict = enums.Verdict.VACUOUS

    def record(self, label: str, verdict: enums.Verdict, rho: int = 0, duplicate: bool = False):
        self.instances += 1
        verdict = enums.Verdict(verdict)
        if verdict == enums.Verdict.PASS:
            self.passed += 1
        elif verdict == enums.Verdict.FAIL:
            self.failed += 1
            self.findings.append(label)
        else:
            self.vacuous += 1
        if verdict != enums.Verdict.VACUOUS and rho >= 1:
            self.non_vacuous_with_terms += 1
        if duplicate:
            self.duplicate_t.append(label)

    def close(self) -> "CampaignReport":
        if self.failed:
            self.verdict = enums.Verdict.FAIL
        elif self.passed:
            self.verdict = enums.Verdict.PASS
        else:
            self.verdict = enums.Verdict.VACUOUS
        return self


# === Equivalence reports ===


class InvarianceTrial(ReportModel):
    index: int
    accepted: bool
    attempts: int = 1
    bent_count: Optional[int] = None
    is_max: Optional[bool] = None
    violation: bool = False


class InvarianceReport(ReportModel):
    mode: enums.EquivMode
    trials: int
    seed: int
    baseline_bent_count: int
    baseline_is_max: bool
    accepted: int = 0
    violations: int = 0
    results: List[InvarianceTrial] = Field(default_factory=list)
    verdict: enums.Verdict


# === CLI plan ===


class RunPlan(BaseModel):
    """A validated command invocation."""

    subcommand: enums.Subcommand
    field: Optional[str] = None
    fn: Optional[str] = None
    family: Optional[str] = None
    out: Optional[str] = None
    format: enums.OutputFormat = enums.OutputFormat.json
    override_guard: bool = False
    seed: Optional[int] = None
    options: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("field")
    def validate_field_spec(cls, v):
        if v is not None:
            from maxbent.services.field import parse_field_spec

            parse_field_spec(v)
        return v

    @model_validator(mode="after")
    def check_inputs(self):
        if self.fn and self.family:
            raise ValueError("conflicting inputs: give either --fn or --family, not both")
        needs_input = {enums.Subcommand.analyze, enums.Subcommand.census, enums.Subcommand.diffspec, enums.Subcommand.equiv}
        if self.subcommand in needs_input and not (self.fn or self.family):
            raise ValueError(f"{self.subcommand.value} needs an input: --fn or --family")
        return self

    def family_params(self) -> Optional[FamilyParams]:
        return FamilyParams.parse(self.family) if self.family else None
