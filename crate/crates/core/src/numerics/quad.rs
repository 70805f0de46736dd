use super::Real;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
}

fn kronrod<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let radius = half * (b - a);
    let fc = f(center);
    let mut gauss = fc * T::lit(WG[3]);
    let mut kron = fc * T::lit(WGK[7]);
    for i in 0..7 {
        let dx = radius * T::lit(XGK[i]);
        let pair = f(center - dx) + f(center + dx);
        kron = kron + T::lit(WGK[i]) * pair;
        if i % 2 == 1 {
            gauss = gauss + T::lit(WG[i / 2]) * pair;
        }
    }
    (kron * radius, ((kron - gauss) * radius).abs())
}

/// Adaptive Gauss-Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Intervals are bisected until the summed error estimate is below
/// `max(abs_tol, rel_tol·|value|)` or 4000 intervals are in use.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, abs_tol: T, rel_tol: T) -> Quadrature<T> {
    let (v, e) = kronrod(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total: T = pieces.iter().fold(T::zero(), |s, p| s + p.2);
        let err: T = pieces.iter().fold(T::zero(), |s, p| s + p.3);
        if err <= abs_tol.max(rel_tol * total.abs()) || pieces.len() >= 4000 {
            return Quadrature { value: total, error: err };
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = T::lit(0.5) * (lo + hi);
        let (v1, e1) = kronrod(&f, lo, mid);
        let (v2, e2) = kronrod(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// Integral of a non-negative, eventually decreasing `f` over `[0, ∞)`.
///
/// The upper limit `U` is doubled from `start` until `f(U)·U` falls below
/// `1e-16` of the integral accumulated so far; the mass is accumulated over
/// consecutive panels `[U/2, U]`.
pub fn integrate_to_infinity<T: Real, F: Fn(T) -> T>(f: F, start: T, abs_tol: T) -> Quadrature<T> {
    let rel = T::lit(1e-14);
    let mut lo = T::zero();
    let mut hi = start.max(T::lit(1.0));
    let mut value = T::zero();
    let mut error = T::zero();
    for _ in 0..200 {
        let q = integrate(&f, lo, hi, abs_tol, rel);
        value = value + q.value;
        error = error + q.error;
        let edge = f(hi).abs() * hi;
        if edge <= T::lit(1e-16) * value.abs() || (value == T::zero() && edge == T::zero() && hi > start) {
            break;
        }
        lo = hi;
        hi = hi * T::lit(2.0);
    }
    Quadrature { value, error }
}
