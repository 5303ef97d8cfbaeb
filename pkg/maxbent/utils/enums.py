import enum


class CaseInsensitiveEnum(str, enum.Enum):
    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            for member in cls:
                if member.value.lower() == value.strip().lower():
                    return member
        return None


class Verdict(CaseInsensitiveEnum):
    PASS = "PASS"
    FAIL = "FAIL"
    VACUOUS = "VACUOUS"


class PredictedKind(CaseInsensitiveEnum):
    SUBFIELD_K = "SUBFIELD_K"
    E_SET = "E_SET"
    O_SET = "O_SET"


class PreconditionForm(CaseInsensitiveEnum):
    """Shapes of the no-root polynomials guarding the bent families"""

    # sum_j g_j^(2^(k-t_j)) z^(2^(k-t_j)-1) + 1
    A = "A"
    # sum_j g_j^(2^(k-i)) z^(2^t_j-1) + 1
    B = "B"


class OutputFormat(str, enum.Enum):
    json = "json"
    csv = "csv"
    table = "table"


class EquivMode(str, enum.Enum):
    ea = "ea"
    ccz = "ccz"


class CczSampler(str, enum.Enum):
    uniform = "uniform"
    shear = "shear"


class Subcommand(str, enum.Enum):
    analyze = "analyze"
    census = "census"
    diffspec = "diffspec"
    construct = "construct"
    equiv = "equiv"
    verify = "verify"


class Theorem(CaseInsensitiveEnum):
    APN_PLATEAUED = "apn-plateaued"
    BINOMIAL_DIFF = "binomial-diff"
    DELTA2_ANOMALY = "delta2-anomaly"
    GENERAL_ANOMALY = "general-anomaly"
    BENT_ALPHA = "bent-alpha"
    LEMMA1 = "lemma1"
    INVARIANCE = "invariance"


class CampaignFamily(CaseInsensitiveEnum):
    BINOMIAL = "binomial"
    GENERAL = "general"
