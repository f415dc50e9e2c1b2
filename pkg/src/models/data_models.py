from enum import Enum
from typing import Optional, List, Dict, Any
from pydantic import BaseModel, Field, model_validator


class OperatorKind(str, Enum):
    """Shape of a monomial operator's action"""
    SCALAR = "scalar"
    DIAGONAL = "diagonal"
    GENERAL = "general"


class ScanMode(str, Enum):
    """How a configuration scan was carried out"""
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


class BoundaryCondition(str, Enum):
    """Patch boundary conditions"""
    TORUS = "torus"
    OPEN = "open"


class LinkAssignment(str, Enum):
    """Which two boundary legs form a link space.

    The value names the leg of site (x-1, row) and the leg of site (x, row).
    """
    LITERAL_1_2 = "literal_1_2"
    SWAPPED_2_1 = "swapped_2_1"
    UPPER_3_4 = "upper_3_4"
    UPPER_4_3 = "upper_4_3"
    AUTO = "auto"


class OutputFormat(str, Enum):
    """CLI report format on standard output"""
    JSON = "json"
    TEXT = "text"


class LawViolation(BaseModel):
    """A group law that fails, with the witnessing tuple"""
    law: str = Field(..., description="identity, inverse, associativity or range")
    witness: List[int] = Field(default_factory=list, description="Element indices witnessing the violation")


class GroupFile(BaseModel):
    """Group file: multiplication table by element index, identity at 0"""
    order: int = Field(..., description="Number of elements")
    table: List[List[int]] = Field(..., description="order x order multiplication table")


class CochainFile(BaseModel):
    """Cochain file with exponents over a common denominator, lexicographic order"""
    group: str = Field(..., description="Group shorthand (zN, zN*zM) or path to a group file")
    denominator: int = Field(..., description="Common denominator m of all exponents")
    exponents: List[int] = Field(..., description="Flat exponent array, entry e means exp(2 pi i e/m)")
    degree: int = Field(3, description="2 for a 2-cochain, 3 for a 3-cochain")


class CocycleCheckResult(BaseModel):
    """Outcome of the exhaustive cocycle scan"""
    passed: bool = Field(..., description="True iff the cocycle identity holds everywhere")
    quadruple: Optional[List[int]] = Field(None, description="First violating (g,h,k,l)")
    residual: Optional[str] = Field(None, description="Residual phase exponent a/b at the violation")


class ClassVerdict(BaseModel):
    """Cohomology class comparison for an extracted table"""
    matches_input: bool = Field(..., description="Extracted table is cohomologous to the input")
    cyclic_level: Optional[int] = Field(None, description="Level p for cyclic groups, null otherwise")
    witness: Optional[CochainFile] = Field(None, description="2-cochain mu with d(mu) = extracted / input")


class TripleDiagnostic(BaseModel):
    """Per-triple scalar-localization diagnostics"""
    triple: List[int] = Field(..., description="(g, h, k)")
    phase: str = Field(..., description="Extracted phase exponent a/b")
    kind: OperatorKind = Field(..., description="Classification of the associator")
    support: List[int] = Field(default_factory=list, description="Registers the associator acts on")
    residual_support: List[int] = Field(default_factory=list, description="Support of the tilded right parts")
    scan: ScanMode = Field(ScanMode.EXHAUSTIVE, description="Exhaustive or sampled classification")

    class Config:
        use_enum_values = True


class IndexReport(BaseModel):
    """Output of an index extraction run"""
    group: str = Field(..., description="Group identifier")
    cocycle: str = Field(..., description="Cocycle identifier")
    denominator: int = Field(..., description="Common denominator of extracted exponents")
    extracted_exponents: List[int] = Field(default_factory=list, description="Flat |G|^3 exponent table")
    cocycle_check: bool = Field(False, description="Extracted table passes the cocycle identity")
    class_: Optional[ClassVerdict] = Field(None, alias="class", description="Class identification")
    diagnostics: List[Dict[str, Any]] = Field(default_factory=list, description="Per-triple and per-pair diagnostics")
    timings_ms: Dict[str, float] = Field(default_factory=dict, description="Wall-clock timings")
    status: str = Field("success", description="success or failure")

    class Config:
        populate_by_name = True


class CheckResult(BaseModel):
    """One itemized check inside a verification suite"""
    name: str = Field(..., description="Check name")
    passed: bool = Field(..., description="Whether the check passed")
    instantiates: str = Field("", description="The invariance or identity the check instantiates")
    details: Dict[str, Any] = Field(default_factory=dict, description="Supporting data")


class SuiteReport(BaseModel):
    """Result of a verification suite"""
    suite: str = Field(..., description="Suite name")
    passed: bool = Field(..., description="True iff every check passed")
    seed: Optional[int] = Field(None, description="Seed used for randomized choices")
    checks: List[CheckResult] = Field(default_factory=list, description="Itemized checks")
    summary: str = Field("", description="Human-readable summary")


class PatchRunConfig(BaseModel):
    """Patch oracle run configuration"""
    group: str = Field(..., description="Group shorthand or file")
    cocycle: Optional[str] = Field(None, description="Cocycle file; absent means the standard level")
    level: int = Field(0, description="Standard cyclic level when no cocycle file is given")
    W: int = Field(6, ge=2, description="Patch width in sites")
    H: int = Field(4, ge=2, description="Patch height in sites")
    bc: BoundaryCondition = Field(BoundaryCondition.TORUS, description="Boundary condition")
    link_assignment: LinkAssignment = Field(LinkAssignment.AUTO, description="Boundary leg pairing")

    class Config:
        use_enum_values = True


class RunConfig(BaseModel):
    """Validated command-line configuration"""
    command: str = Field(..., description="Top-level command")
    subcommand: Optional[str] = Field(None, description="Subcommand or suite name")
    group: str = Field("z2", description="Group: zN, zN*zM or a group file")
    level: Optional[int] = Field(None, ge=0, description="Standard cyclic level")
    levels: List[int] = Field(default_factory=list, description="Levels for stacking")
    cocycle: Optional[str] = Field(None, description="Cocycle file")
    other: Optional[str] = Field(None, description="Second cocycle file for comparisons")
    output: Optional[str] = Field(None, description="Output file for generated cochains")
    length: Optional[int] = Field(None, ge=2, description="Chain length M; default from settings")
    cut: Optional[int] = Field(None, ge=0, description="Cut position p; default from settings or M//2")
    W: int = Field(6, ge=2, description="Patch width")
    H: int = Field(4, ge=2, description="Patch height")
    link_assignment: LinkAssignment = Field(LinkAssignment.AUTO, description="Patch link assignment")
    bc: BoundaryCondition = Field(BoundaryCondition.TORUS, description="Patch boundary condition")
    config: Optional[str] = Field(None, description="Patch run configuration file")
    seed: int = Field(0, ge=0, lt=2 ** 64, description="Seed for randomized suites")
    format: OutputFormat = Field(OutputFormat.JSON, description="Report format")

    class Config:
        use_enum_values = True

    @model_validator(mode="after")
    def _cut_inside_chain(self) -> "RunConfig":
        if self.cut is not None and self.length is not None and self.cut >= self.length:
            raise ValueError(f"cut {self.cut} must lie in [0, {self.length})")
        return self


class OracleReport(BaseModel):
    """Patch oracle run: per-check outcomes and the arc-extracted table"""
    group: str = Field(..., description="Group identifier")
    cocycle: str = Field(..., description="Cocycle identifier")
    W: int = Field(..., description="Patch width")
    H: int = Field(..., description="Patch height")
    bc: BoundaryCondition = Field(BoundaryCondition.TORUS, description="Boundary condition")
    link_assignment: Optional[str] = Field(None, description="Leg pairing used for the link spaces")
    candidates: Dict[str, bool] = Field(default_factory=dict, description="Compensation outcome per candidate pairing")
    checks: List[CheckResult] = Field(default_factory=list, description="Itemized checks with overlap phases")
    denominator: Optional[int] = Field(None, description="Denominator of the arc-extracted table")
    extracted_exponents: List[int] = Field(default_factory=list, description="Arc-extracted |G|^3 table")
    passed: bool = Field(False, description="True iff every check passed")
    summary: str = Field("", description="Human-readable summary")

    class Config:
        use_enum_values = True
