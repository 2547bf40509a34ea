"""Chart descriptions and frame calculus.

Parses the line-oriented instance file format into a validated
ManifoldSpec and provides directional derivatives, Lie brackets,
structure coefficients, and exact changes between coordinate and frame
components.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .scalars import Chart, ExprSyntaxError, Scalar

KNOWN_CHECKS = (
    "contact",
    "axioms",
    "nullity",
    "sasakian",
    "normality",
    "symmetric",
    "phi-symmetric",
    "phi-recurrent",
    "constant-curvature",
    "decomposition3d",
    "flat",
)


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ValueError):
    pass


class SingularFrame(ValidationError):
    pass


@dataclass(frozen=True)
class FrameField:
    name: str
    components: tuple  # coordinate components, one Scalar per coordinate


@dataclass(frozen=True)
class ManifoldSpec:
    name: str
    chart: Chart
    dim: int
    frame: tuple  # of FrameField
    metric: tuple  # dim x dim of Scalar, symmetric
    xi: tuple  # frame components of the Reeb field
    phi: tuple  # dim x dim of Scalar, phi(E_j) = sum_i phi[i][j] E_i
    requested_checks: tuple
    deta_convention: str = "half"
    claimed_k: Scalar | None = None
    _cache: dict = dc_field(default_factory=dict, compare=False, repr=False)

    @property
    def coords(self):
        return self.chart.coords

    def frame_matrix(self):
        """Rows are the coordinate components of the frame fields."""
        return tuple(f.components for f in self.frame)

    def frame_matrix_inverse(self):
        if "frame_inv" not in self._cache:
            self._cache["frame_inv"] = invert_matrix(self.frame_matrix(), self.chart)
        return self._cache["frame_inv"]

    def excluded_locus(self):
        """Product of the distinct denominators appearing in the input data."""
        dens = []
        seen = set()
        entries = [s for f in self.frame for s in f.components]
        entries += [s for row in self.metric for s in row]
        entries += [s for row in self.phi for s in row]
        entries += list(self.xi)
        for s in entries:
            d = s.denominator_poly()
            if d.is_constant():
                continue
            if d not in seen:
                seen.add(d)
                dens.append(d)
        locus = self.chart.one
        for d in dens:
            locus = locus * d
        return locus


def vf_apply(X, f, chart):
    """Directional derivative: X given by coordinate components."""
    out = chart.zero
    for i, name in enumerate(chart.coords):
        out = out + X[i] * f.diff(name)
    return out


def lie_bracket(X, Y, chart):
    """[X, Y] in coordinate components."""
    return tuple(
        vf_apply(X, Y[i], chart) - vf_apply(Y, X[i], chart)
        for i in range(len(chart.coords))
    )


def solve_linear(A, rhs, chart):
    """Exact Gaussian elimination; pivot is the first nonzero entry in
    column order (deterministic).  Raises SingularFrame on a zero column."""
    n = len(A)
    M = [list(row) + list(rs) for row, rs in zip(A, rhs)]
    width = len(M[0])
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if not M[r][col].is_zero:
                pivot_row = r
                break
        if pivot_row is None:
            raise SingularFrame(f"zero pivot in column {col}")
        M[col], M[pivot_row] = M[pivot_row], M[col]
        piv = M[col][col]
        M[col] = [entry / piv for entry in M[col]]
        for r in range(n):
            if r == col or M[r][col].is_zero:
                continue
            factor = M[r][col]
            M[r] = [M[r][j] - factor * M[col][j] for j in range(width)]
    return [row[n:] for row in M]


def invert_matrix(A, chart):
    n = len(A)
    ident = [[chart.one if i == j else chart.zero for j in range(n)] for i in range(n)]
    sol = solve_linear(A, ident, chart)
    return tuple(tuple(row) for row in sol)


def matrix_determinant(A, chart):
    """Exact determinant by cofactor-free elimination (field arithmetic)."""
    n = len(A)
    M = [list(row) for row in A]
    det = chart.one
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if not M[r][col].is_zero:
                pivot_row = r
                break
        if pivot_row is None:
            return chart.zero
        if pivot_row != col:
            M[col], M[pivot_row] = M[pivot_row], M[col]
            det = -det
        piv = M[col][col]
        det = det * piv
        for r in range(col + 1, n):
            if M[r][col].is_zero:
                continue
            factor = M[r][col] / piv
            M[r] = [M[r][j] - factor * M[col][j] for j in range(n)]
    return det


def to_frame_components(v, spec):
    """Express coordinate components in the frame: v = sum_k result_k E_k."""
    inv = spec.frame_matrix_inverse()
    n = spec.dim
    # frame rows F: E_i = sum_a F[i][a] d/dx_a, so components solve F^T c = v
    return tuple(
        sum((inv[a][k] * v[a] for a in range(n)), spec.chart.zero) for k in range(n)
    )


def frame_to_coordinates(c, spec):
    """Expand frame components into coordinate components."""
    F = spec.frame_matrix()
    n = spec.dim
    return tuple(
        sum((c[i] * F[i][a] for i in range(n)), spec.chart.zero) for a in range(n)
    )


def frame_apply(spec, i, f):
    """E_i(f) for a frame field given by index."""
    return vf_apply(spec.frame[i].components, f, spec.chart)


@dataclass(frozen=True)
class StructureCoeffs:
    c: tuple  # c[k][i][j] with [E_i, E_j] = sum_k c[k][i][j] E_k


def structure_coeffs(spec):
    n = spec.dim
    chart = spec.chart
    c = [[[chart.zero] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            br = lie_bracket(spec.frame[i].components, spec.frame[j].components, chart)
            comps = to_frame_components(br, spec)
            for k in range(n):
                c[k][i][j] = comps[k]
                c[k][j][i] = -comps[k]
    return StructureCoeffs(tuple(tuple(tuple(row) for row in layer) for layer in c))


def jacobi_residuals(spec, coeffs):
    """Cyclic-sum residuals of the Jacobi identity, as frame components."""
    n = spec.dim
    chart = spec.chart
    c = coeffs.c
    residuals = []
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(j + 1, n):
                for k in range(n):
                    total = chart.zero
                    for (a, b, d) in ((i, j, l), (j, l, i), (l, i, j)):
                        # [E_a, [E_b, E_d]] expanded through the coefficients
                        total = total + frame_apply(spec, a, c[k][b][d])
                        for m in range(n):
                            total = total + c[m][b][d] * c[k][a][m]
                    residuals.append(((k, i, j, l), total))
    return residuals


def _split_csv_line(body):
    return [p for p in body.replace(",", " ").split() if p]


def parse_spec(text, name="instance", trig=False, deta_override=None, checks_override=None):
    """Parse the instance file format into a validated ManifoldSpec."""
    dim = None
    coords = None
    chart = None
    frame_lines = []  # (lineno, name, exprs)
    metric_lines = []  # (lineno, a, b, expr)
    metric_orthonormal = False
    xi_line = None
    phi_lines = []
    deta = "half"
    checks = None
    claim_k = None
    trig_flag = trig

    lines = text.splitlines()
    # first pass: structural lines that configure the chart
    stripped = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            stripped.append((lineno, line))

    for lineno, line in stripped:
        head, _, body = line.partition(" ")
        body = body.strip()
        if head == "trig":
            if body not in ("on", "off"):
                raise ParseError("trig takes 'on' or 'off'", lineno)
            trig_flag = body == "on"

    for lineno, line in stripped:
        head, _, body = line.partition(" ")
        body = body.strip()
        if head == "dim":
            try:
                dim = int(body)
            except ValueError:
                raise ParseError(f"bad dimension {body!r}", lineno) from None
        elif head == "coords":
            names = _split_csv_line(body)
            if len(set(names)) != len(names):
                raise ParseError("repeated coordinate name", lineno)
            coords = names
            chart = Chart(names, trig=trig_flag)
        elif head in ("frame", "metric", "xi", "phi", "deta", "checks", "claim", "trig"):
            pass
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)

    if dim is None:
        raise ParseError("missing 'dim' line")
    if dim <= 0 or dim % 2 == 0:
        raise ValidationError(f"dimension must be odd and positive, got {dim}")
    if chart is None:
        raise ParseError("missing 'coords' line")
    if len(coords) != dim:
        raise ValidationError(f"got {len(coords)} coordinates for dim {dim}")

    def parse_expr(body, lineno):
        try:
            return chart.parse(body)
        except ExprSyntaxError as exc:
            raise ParseError(str(exc), lineno) from None

    frame_names = []
    frames = []
    phi_raw = {}
    for lineno, line in stripped:
        head, _, body = line.partition(" ")
        body = body.strip()
        if head == "frame":
            fname, _, rhs = body.partition("=")
            fname = fname.strip()
            rhs = rhs.strip()
            if not fname or not rhs.startswith("[") or not rhs.endswith("]"):
                raise ParseError("frame line must be 'frame NAME = [e, e, ...]'", lineno)
            if fname in frame_names:
                raise ParseError(f"repeated frame field {fname!r}", lineno)
            comps = [parse_expr(p.strip(), lineno) for p in rhs[1:-1].split(",")]
            if len(comps) != dim:
                raise ValidationError(
                    f"frame field {fname} has {len(comps)} components, expected {dim}"
                )
            frame_names.append(fname)
            frames.append(FrameField(fname, tuple(comps)))
        elif head == "metric":
            if body == "orthonormal":
                metric_orthonormal = True
            else:
                parts = body.split("=", 1)
                if len(parts) != 2:
                    raise ParseError("metric line must be 'metric Ei Ej = expr'", lineno)
                pair = parts[0].split()
                if len(pair) != 2:
                    raise ParseError("metric line must name two frame fields", lineno)
                metric_lines.append((lineno, pair[0], pair[1], parts[1].strip()))
        elif head == "xi":
            xi_line = (lineno, body)
        elif head == "phi":
            fname, _, rhs = body.partition("=")
            phi_lines.append((lineno, fname.strip(), rhs.strip()))
        elif head == "deta":
            if body not in ("half", "full"):
                raise ParseError("deta takes 'half' or 'full'", lineno)
            deta = body
        elif head == "checks":
            names = _split_csv_line(body)
            for n in names:
                if n not in KNOWN_CHECKS:
                    raise ParseError(f"unknown check {n!r}", lineno)
            checks = tuple(names)
        elif head == "claim":
            kname, _, rhs = body.partition("=")
            if kname.strip() != "k":
                raise ParseError("only 'claim k = expr' is supported", lineno)
            claim_k = parse_expr(rhs.strip(), lineno)

    if len(frames) != dim:
        raise ValidationError(f"expected {dim} frame fields, got {len(frames)}")

    index_of = {f.name: i for i, f in enumerate(frames)}

    # metric assembly
    g = [[None] * dim for _ in range(dim)]
    for lineno, a, b, expr in metric_lines:
        if a not in index_of or b not in index_of:
            raise ParseError(f"unknown frame field in metric line", lineno)
        i, j = index_of[a], index_of[b]
        val = parse_expr(expr, lineno)
        for (p, q) in ((i, j), (j, i)):
            if g[p][q] is not None and g[p][q] != val:
                raise ValidationError(
                    f"conflicting metric entries for ({frames[p].name}, {frames[q].name})"
                )
            g[p][q] = val
    if metric_orthonormal:
        for i in range(dim):
            for j in range(dim):
                if g[i][j] is None:
                    g[i][j] = chart.one if i == j else chart.zero
    else:
        missing = [
            (i, j) for i in range(dim) for j in range(i, dim) if g[i][j] is None
        ]
        if missing:
            if not metric_lines:
                raise ParseError("missing metric specification")
            i, j = missing[0]
            raise ValidationError(
                f"metric entry ({frames[i].name}, {frames[j].name}) not given"
            )
    metric = tuple(tuple(row) for row in g)

    # phi assembly: phi E_j = sum of scalar-weighted frame names
    phi = [[chart.zero] * dim for _ in range(dim)]
    seen_phi = set()
    for lineno, fname, rhs in phi_lines:
        if fname not in index_of:
            raise ParseError(f"unknown frame field {fname!r} in phi line", lineno)
        j = index_of[fname]
        if j in seen_phi:
            raise ParseError(f"repeated phi line for {fname}", lineno)
        seen_phi.add(j)
        for coeff, target in _parse_frame_combination(rhs, chart, index_of, lineno):
            if target is None:
                if not coeff.is_zero:
                    raise ParseError("phi right-hand side must be a frame combination", lineno)
            else:
                phi[target][j] = phi[target][j] + coeff
    if len(seen_phi) != dim:
        raise ValidationError("phi must be given on every frame field")
    phi = tuple(tuple(row) for row in phi)

    # xi: either a frame name or explicit frame components
    if xi_line is None:
        raise ParseError("missing 'xi' line")
    lineno, body = xi_line
    if body.startswith("["):
        if not body.endswith("]"):
            raise ParseError("bad xi component list", lineno)
        xi = tuple(parse_expr(p.strip(), lineno) for p in body[1:-1].split(","))
        if len(xi) != dim:
            raise ValidationError(f"xi needs {dim} frame components")
    else:
        if body not in index_of:
            raise ParseError(f"unknown frame field {body!r} for xi", lineno)
        xi = tuple(
            chart.one if i == index_of[body] else chart.zero for i in range(dim)
        )

    spec = ManifoldSpec(
        name=name,
        chart=chart,
        dim=dim,
        frame=tuple(frames),
        metric=metric,
        xi=xi,
        phi=phi,
        requested_checks=checks_override or checks or KNOWN_CHECKS[:-1],
        deta_convention=deta_override or deta,
        claimed_k=claim_k,
    )
    validate_spec(spec)
    return spec


def _parse_frame_combination(rhs, chart, index_of, lineno):
    """Parse 'coeff*NAME + ... ' where coeff is an optional scalar factor."""
    if not rhs:
        raise ParseError("empty right-hand side", lineno)
    terms = []
    depth = 0
    current = ""
    sign = 1
    pending_sign = 1
    # split on top-level + / -
    chunks = []
    for ch in rhs:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and current.strip():
            chunks.append((pending_sign, current))
            current = ""
            pending_sign = 1 if ch == "+" else -1
        elif ch in "+-" and depth == 0 and not current.strip():
            pending_sign *= 1 if ch == "+" else -1
        else:
            current += ch
    if current.strip():
        chunks.append((pending_sign, current))
    for sgn, chunk in chunks:
        chunk = chunk.strip()
        # find a frame-name factor among the top-level '*' factors
        factors = _split_top_level(chunk, "*")
        target = None
        coeff_factors = []
        for f in factors:
            f = f.strip()
            if f in index_of and target is None:
                target = index_of[f]
            else:
                coeff_factors.append(f)
        coeff_text = "*".join(coeff_factors) if coeff_factors else "1"
        try:
            coeff = chart.parse(coeff_text)
        except ExprSyntaxError as exc:
            raise ParseError(str(exc), lineno) from None
        if sgn < 0:
            coeff = -coeff
        terms.append((coeff, target))
    return terms


def _split_top_level(text, sep):
    parts = []
    depth = 0
    current = ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(current)
            current = ""
        else:
            current += ch
    parts.append(current)
    return parts


def validate_spec(spec):
    chart = spec.chart
    det = matrix_determinant(spec.frame_matrix(), chart)
    if det.is_zero:
        raise SingularFrame("frame fields are linearly dependent")
    for i in range(spec.dim):
        for j in range(spec.dim):
            if spec.metric[i][j] != spec.metric[j][i]:
                raise ValidationError("metric matrix is not symmetric")
    # unit Reeb field: g(xi, xi) = 1 as a canonical identity
    norm = chart.zero
    for i in range(spec.dim):
        for j in range(spec.dim):
            norm = norm + spec.xi[i] * spec.xi[j] * spec.metric[i][j]
    if norm != 1:
        raise ValidationError(f"xi is not unit: g(xi, xi) = {norm.render()}")
