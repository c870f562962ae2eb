"""
Domain schemas for the strip factorization lab.
Defines strips, grids, sampled lines and the analytic function catalog.
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class FunctionKind(str, Enum):
    """Catalog of analytic functions the lab can evaluate anywhere"""
    IDENTITY = "identity"
    SCALED_SINE = "scaled-sine"
    CONSTANT = "constant"
    EXPONENTIAL = "exponential"
    COSINE_OFFSET = "cosine-offset"
    PRODUCT = "product"


class DeltaRoute(str, Enum):
    """Evaluation route for Δ after the recursion step"""
    ASYMPTOTIC = "asymptotic"
    PRODUCT = "product"


class GaugeConvention(str, Enum):
    """How the free unimodular constant of a factor pair is fixed"""
    PHASE_ZERO_AT_CENTER = "center"
    MATCH_REFERENCE = "reference"


class StripDomain(BaseModel):
    """Open strip lower < Im z < upper plus the weight-class parameter ε"""
    upper: float = Field(..., description="Upper edge of the strip")
    lower: float = Field(..., description="Lower edge of the strip")
    epsilon: float = Field(default=0.0, ge=0.0, description="Weight class parameter ε")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_order(self) -> "StripDomain":
        if not self.upper > self.lower:
            raise ValueError(f"strip needs upper > lower, got {self.upper} <= {self.lower}")
        return self

    def contains(self, y: float) -> bool:
        """Closed-strip membership of a horizontal line"""
        return self.lower <= y <= self.upper

    def interior_lines(self, n_lines: int) -> np.ndarray:
        """Equally spaced offsets strictly inside the strip"""
        return np.linspace(self.lower, self.upper, n_lines + 2)[1:-1]


class GridSpec(BaseModel):
    """Uniform real grid x_k = origin + k·spacing, k = 0..n-1"""
    n: int = Field(..., gt=0, description="Number of samples (power of two)")
    spacing: float = Field(..., gt=0.0, description="Grid step h")
    origin: float = Field(..., description="Leftmost sample position")

    model_config = ConfigDict(frozen=True)

    @field_validator("n")
    @classmethod
    def _power_of_two(cls, v: int) -> int:
        if v & (v - 1):
            raise ValueError(f"n must be a power of two, got {v}")
        return v

    @classmethod
    def centered(cls, n: int, spacing: float) -> "GridSpec":
        """Grid whose sample n//2 sits at x = 0"""
        return cls(n=n, spacing=spacing, origin=-0.5 * n * spacing)

    @property
    def length(self) -> float:
        return self.n * self.spacing

    @property
    def x(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(self.n)

    @property
    def frequencies(self) -> np.ndarray:
        """Angular frequencies ξ of the discrete Fourier set for this window"""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)

    @property
    def frequency_step(self) -> float:
        return 2.0 * np.pi / self.length

    @property
    def center_index(self) -> int:
        return self.n // 2

    @property
    def central_half(self) -> slice:
        return slice(self.n // 4, 3 * self.n // 4)

    def central_band_mask(self, band_fraction: float) -> np.ndarray:
        """Boolean mask over FFT order keeping |ξ| <= band_fraction·ξ_max"""
        cutoff = band_fraction * np.abs(self.frequencies).max()
        return np.abs(self.frequencies) <= cutoff

    def is_commensurate(self, frequency: float, rtol: float = 1e-9) -> bool:
        """Whether a frequency lies on the discrete Fourier grid of the window"""
        m = frequency / self.frequency_step
        return abs(m - round(m)) <= rtol * max(1.0, abs(m))

    def payload(self) -> dict:
        return {"n": self.n, "spacing": self.spacing, "origin": self.origin}


class LineSample(BaseModel):
    """Complex values sampled on the horizontal line Im z = offset_y"""
    grid: GridSpec = Field(..., description="Real grid of the samples")
    offset_y: float = Field(..., description="Imaginary part of the sampled line")
    values: np.ndarray = Field(..., description="n complex samples")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_length(self) -> "LineSample":
        if self.values.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} values, got shape {self.values.shape}")
        return self

    @property
    def points(self) -> np.ndarray:
        return self.grid.x + 1j * self.offset_y


class AnalyticFnSpec(BaseModel):
    """Catalog entry for an analytic function evaluable at any complex z"""
    kind: FunctionKind = Field(..., description="Catalog kind")
    beta: Optional[float] = Field(default=None, description="Frequency for scaled-sine and cosine-offset")
    constant: Optional[complex] = Field(default=None, description="Value of a constant function")
    kappa: Optional[float] = Field(default=None, description="Rate of the exponential e^{iκz}")
    offset: Optional[float] = Field(default=None, description="Additive offset of cosine-offset")
    factors: List["AnalyticFnSpec"] = Field(default_factory=list, description="Factors of a product")
    shift: float = Field(default=0.0, description="Real translation x0: the entry stands for f(z - x0)")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_parameters(self) -> "AnalyticFnSpec":
        needed = {
            FunctionKind.SCALED_SINE: ("beta",),
            FunctionKind.CONSTANT: ("constant",),
            FunctionKind.EXPONENTIAL: ("kappa",),
            FunctionKind.COSINE_OFFSET: ("beta", "offset"),
        }.get(self.kind, ())
        missing = [name for name in needed if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind.value} needs {', '.join(missing)}")
        if self.kind == FunctionKind.PRODUCT and not self.factors:
            raise ValueError("product needs at least one factor")
        if self.kind == FunctionKind.PRODUCT and self.shift != 0.0:
            raise ValueError("a product is translated through its factors")
        return self

    @classmethod
    def identity(cls) -> "AnalyticFnSpec":
        return cls(kind=FunctionKind.IDENTITY)

    @classmethod
    def scaled_sine(cls, beta: float) -> "AnalyticFnSpec":
        return cls(kind=FunctionKind.SCALED_SINE, beta=beta)

    @classmethod
    def const(cls, value: complex) -> "AnalyticFnSpec":
        return cls(kind=FunctionKind.CONSTANT, constant=complex(value))

    @classmethod
    def exponential(cls, kappa: float) -> "AnalyticFnSpec":
        return cls(kind=FunctionKind.EXPONENTIAL, kappa=kappa)

    @classmethod
    def cosine_offset(cls, beta: float, offset: float) -> "AnalyticFnSpec":
        return cls(kind=FunctionKind.COSINE_OFFSET, beta=beta, offset=offset)

    @classmethod
    def product(cls, *factors: "AnalyticFnSpec") -> "AnalyticFnSpec":
        return cls(kind=FunctionKind.PRODUCT, factors=list(factors))

    def translated(self, x0: float) -> "AnalyticFnSpec":
        """The function z -> f(z - x0) for real x0"""
        if self.kind == FunctionKind.PRODUCT:
            return AnalyticFnSpec.product(*(factor.translated(x0) for factor in self.factors))
        if self.kind == FunctionKind.CONSTANT:
            return self
        return self.model_copy(update={"shift": self.shift + float(x0)})

    @property
    def label(self) -> str:
        if self.kind == FunctionKind.IDENTITY:
            base = "z"
        elif self.kind == FunctionKind.SCALED_SINE:
            base = f"2sin({self.beta:g}z)"
        elif self.kind == FunctionKind.CONSTANT:
            base = f"{self.constant:g}"
        elif self.kind == FunctionKind.EXPONENTIAL:
            base = f"exp({self.kappa:g}iz)"
        elif self.kind == FunctionKind.COSINE_OFFSET:
            base = f"({self.offset:g}+cos({self.beta:g}z))"
        else:
            return "*".join(factor.label for factor in self.factors)
        return base if self.shift == 0.0 else f"{base}[z-{self.shift:g}]"

    def leaves(self) -> List["AnalyticFnSpec"]:
        """Non-product factors, products flattened"""
        if self.kind != FunctionKind.PRODUCT:
            return [self]
        return [leaf for factor in self.factors for leaf in factor.leaves()]

    def evaluate(self, z) -> np.ndarray:
        """f(z) for a scalar or array of complex points"""
        z = np.asarray(z, dtype=complex) - self.shift
        if self.kind == FunctionKind.IDENTITY:
            return z.copy()
        if self.kind == FunctionKind.SCALED_SINE:
            return 2.0 * np.sin(self.beta * z)
        if self.kind == FunctionKind.CONSTANT:
            return np.full(z.shape, self.constant, dtype=complex)
        if self.kind == FunctionKind.EXPONENTIAL:
            return np.exp(1j * self.kappa * z)
        if self.kind == FunctionKind.COSINE_OFFSET:
            return self.offset + np.cos(self.beta * z)
        result = np.ones(z.shape, dtype=complex)
        for factor in self.factors:
            result = result * factor.evaluate(z)
        return result

    def log_derivative(self, z) -> np.ndarray:
        """f'(z)/f(z), valid away from the zeros of f"""
        z = np.asarray(z, dtype=complex) - self.shift
        if self.kind == FunctionKind.IDENTITY:
            return 1.0 / z
        if self.kind == FunctionKind.SCALED_SINE:
            return self.beta / np.tan(self.beta * z)
        if self.kind == FunctionKind.CONSTANT:
            return np.zeros(z.shape, dtype=complex)
        if self.kind == FunctionKind.EXPONENTIAL:
            return np.full(z.shape, 1j * self.kappa, dtype=complex)
        if self.kind == FunctionKind.COSINE_OFFSET:
            return -self.beta * np.sin(self.beta * z) / (self.offset + np.cos(self.beta * z))
        result = np.zeros(z.shape, dtype=complex)
        for factor in self.factors:
            result = result + factor.log_derivative(z)
        return result

    def reflected(self) -> "AnalyticFnSpec":
        """The function f̄(z) = conj f(conj z)"""
        if self.kind == FunctionKind.CONSTANT:
            return AnalyticFnSpec.const(self.constant.conjugate())
        if self.kind == FunctionKind.EXPONENTIAL:
            return self.model_copy(update={"kappa": -self.kappa})
        if self.kind == FunctionKind.PRODUCT:
            return AnalyticFnSpec.product(*(factor.reflected() for factor in self.factors))
        # real Taylor coefficients; a real shift commutes with conjugation
        return self

    @property
    def identically_zero(self) -> bool:
        for leaf in self.leaves():
            if leaf.kind == FunctionKind.SCALED_SINE and leaf.beta == 0.0:
                return True
            if leaf.kind == FunctionKind.CONSTANT and leaf.constant == 0:
                return True
        return False

    def inf_abs_on_line(self, grid: GridSpec, offset_y: float) -> Tuple[float, float]:
        """Smallest |f| over the grid points of a line, with its x location"""
        magnitudes = np.abs(self.evaluate(grid.x + 1j * offset_y))
        k = int(np.argmin(magnitudes))
        return float(magnitudes[k]), float(grid.x[k])


AnalyticFnSpec.model_rebuild()


class DeltaSettings(BaseModel):
    """Evaluation settings for the Weierstrass Δ function"""
    product_terms: int = Field(default=1000, ge=1, description="Truncation N of the product")
    recursion_floor: float = Field(default=10.0, description="Push Re z above this before the fast route")
    route: DeltaRoute = Field(default=DeltaRoute.ASYMPTOTIC, description="Route used after recursion")
    tail_terms: int = Field(default=24, ge=2, description="Hurwitz zeta terms in the product tail")

    model_config = ConfigDict(frozen=True)


class OracleParams(BaseModel):
    """Parameters of the closed-form pair for f(z) = z"""
    alpha: float = Field(..., gt=0.0, description="Half width α of the boundary lines")

    model_config = ConfigDict(frozen=True)

    @property
    def beta_c(self) -> complex:
        return 1j / (4.0 * self.alpha)

    @property
    def gamma_c(self) -> float:
        return -np.log(4.0 * self.alpha) / (2.0 * self.alpha)


class BoundaryLogData(BaseModel):
    """Continuous-branch logarithms of f on the two boundary lines"""
    grid: GridSpec = Field(..., description="Real grid of the data")
    alpha: float = Field(..., description="Boundary lines sit at Im z = ±α")
    function: AnalyticFnSpec = Field(..., description="Function the logs were taken of")
    a_minus: np.ndarray = Field(..., description="log f(x - αi), unwrapped")
    b_plus: np.ndarray = Field(..., description="conj log f(x + αi) = log f̄(x - αi), unwrapped")
    winding_info: dict = Field(default_factory=dict, description="Net phase increase per array")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def derivatives(self) -> Tuple[np.ndarray, np.ndarray]:
        """Analytic x-derivatives of a_minus and b_plus"""
        x = self.grid.x
        da = self.function.log_derivative(x - 1j * self.alpha)
        db = np.conj(self.function.log_derivative(x + 1j * self.alpha))
        return da, db


class FourierModes(BaseModel):
    """Per-frequency phase modes of a factor pair, FFT order, ξ = 0 entry unused"""
    grid: GridSpec
    phi1_hat: np.ndarray = Field(..., description="Modes of the phase of w1")
    phi2_hat: np.ndarray = Field(..., description="Modes of the phase of w2")
    derivative_domain: bool = Field(default=False, description="Modes are of phase derivatives")
    tapered: bool = Field(default=False, description="A window taper was applied to the data")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class PhaseModel(BaseModel):
    """Phase slope·x + intercept + periodic(x) of a zero-free factor component"""
    slope: float = Field(default=0.0)
    intercept: float = Field(default=0.0)
    periodic: np.ndarray = Field(..., description="Window-periodic phase on the real grid")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class FactorPair(BaseModel):
    """Boundary unitaries w1, w2 of a factorization with diagnostics"""
    grid: GridSpec
    alpha: float
    function: AnalyticFnSpec = Field(..., description="The factored function f")
    w1_real_line: np.ndarray = Field(..., description="w1 on the real grid")
    w2_real_line: np.ndarray = Field(..., description="w2 on the real grid")
    slope1: float = Field(..., description="Affine phase coefficient of w1")
    slope2: float = Field(..., description="Affine phase coefficient of w2")
    gauge: complex = Field(default=1.0 + 0.0j, description="Unimodular constant applied to both")
    residual_b2: float = Field(default=float("nan"))
    residual_b3: float = Field(default=float("nan"))
    zero_factors: List[AnalyticFnSpec] = Field(default_factory=list, description="Factors built from exact blocks")
    phase1: PhaseModel = Field(..., description="Spectral phase of the zero-free part of w1")
    phase2: PhaseModel = Field(..., description="Spectral phase of the zero-free part of w2")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def regauge(self, c: complex) -> "FactorPair":
        """Multiply both components by the unimodular constant c"""
        return self.model_copy(update={
            "w1_real_line": self.w1_real_line * c,
            "w2_real_line": self.w2_real_line * c,
            "gauge": self.gauge * c,
        })

    def with_residuals(self, residual_b2: float, residual_b3: float) -> "FactorPair":
        return self.model_copy(update={"residual_b2": residual_b2, "residual_b3": residual_b3})


class OpMatrix(BaseModel):
    """Dense position-basis matrix of a discretized operator"""
    entries: np.ndarray = Field(..., description="dim×dim complex entries")
    grid: GridSpec
    label: str = Field(..., description="Construction recipe")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_entries(self) -> "OpMatrix":
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError(f"{self.label}: entries must be square, got {self.entries.shape}")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError(f"{self.label}: entries must be finite")
        return self

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


class TestVectorSpec(BaseModel):
    """Dense-core vector e^{-γx² + βx} sampled on a grid"""
    gamma: float = Field(..., gt=0.0)
    beta_c: complex = Field(default=0.0 + 0.0j)

    model_config = ConfigDict(frozen=True)

    # keep pytest from collecting this class
    __test__ = False


class QHeisParams(BaseModel):
    """q-deformed Heisenberg parameters with q = e^{2αβ}"""
    alpha: float = Field(..., gt=0.0)
    beta_h: float = Field(...)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_q(self) -> "QHeisParams":
        if self.alpha * self.beta_h == 0.0:
            raise ValueError("q = 1 is excluded: need alpha·beta_h != 0")
        return self

    @property
    def q(self) -> float:
        return float(np.exp(2.0 * self.alpha * self.beta_h))

    @property
    def q_half(self) -> float:
        return float(np.exp(self.alpha * self.beta_h))

    @classmethod
    def on_grid(cls, alpha: float, beta_index: int, grid: GridSpec) -> "QHeisParams":
        """β_h = 2π·beta_index/(n·spacing), commensurate by construction"""
        return cls(alpha=alpha, beta_h=beta_index * grid.frequency_step)


class OperatorSuite(BaseModel):
    """Discretized e^{±2αP}, L_f, R_f, A_f and B for one function"""
    function: AnalyticFnSpec
    alpha: float
    grid: GridSpec
    expP_plus: OpMatrix
    expP_minus: OpMatrix
    Lf: OpMatrix
    Rf: OpMatrix
    Af: OpMatrix
    B: OpMatrix


class QHeisSuite(BaseModel):
    """Block matrices ρ(u), ρ(p), ρ(x) of the q-deformed Heisenberg representation"""
    params: QHeisParams
    grid: GridSpec
    rho_u: OpMatrix
    rho_p: OpMatrix
    rho_x: OpMatrix


class Subcommand(str, Enum):
    """Pipelines reachable from the command line"""
    DELTA = "delta"
    ORACLE = "oracle"
    FACTORIZE = "factorize"
    POLAR = "polar"
    OPCHECK = "opcheck"
    QHEIS = "qheis"
    NORM = "norm"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class RunConfig(BaseModel):
    """Validated configuration of one command-line run"""
    subcommand: Subcommand = Field(..., description="Pipeline to run")
    alpha: float = Field(..., gt=0.0, description="Half width α of the boundary lines")
    grid: GridSpec = Field(..., description="Real sampling grid")
    function: AnalyticFnSpec = Field(..., description="Function under study")
    beta_index: Optional[int] = Field(default=None, description="Mode index of β_h on the window")
    epsilon: float = Field(default=0.0, ge=0.0, description="Weight class parameter ε")
    lines: List[float] = Field(default_factory=list, description="Extra line offsets to sample")
    gammas: List[float] = Field(default_factory=list, description="Gaussian weights γ")
    tolerances: Dict[str, float] = Field(default_factory=dict, description="Tolerance overrides by class")
    output_path: str = Field(..., description="Artifact directory")
    format: OutputFormat = Field(default=OutputFormat.JSON, description="Artifact format")
    seed: int = Field(..., description="Seed for randomized test points")
    band_fraction: float = Field(default=0.5, gt=0.0, le=1.0, description="Central band kept in test vectors")
    gauge: GaugeConvention = Field(default=GaugeConvention.PHASE_ZERO_AT_CENTER)
    point: complex = Field(default=0.5 + 0.0j, description="Evaluation point of the delta command")
    quiet: bool = Field(default=False, description="Log warnings and errors only")

    model_config = ConfigDict(frozen=True)

    @classmethod
    def from_argv(cls, argv: List[str]) -> "RunConfig":
        """Create a run configuration from command-line arguments"""
        from cli.main import parse_config
        return parse_config(argv)

    def payload(self) -> dict:
        """JSON-ready form used by the manifest and its hash"""
        data = self.model_dump(mode="json", exclude={"quiet", "point", "grid", "function"})
        data["grid"] = self.grid.payload()
        data["function"] = self.function.model_dump(mode="json", exclude_none=True)
        data["point"] = [self.point.real, self.point.imag]
        return data
