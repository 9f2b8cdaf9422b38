//! Gauss-Legendre quadrature and compensated summation utilities shared by
//! the series and membrane engines.

/// Neumaier-compensated accumulator. The correction term also captures the
/// case where the increment exceeds the running sum, so the result is
/// faithful for arbitrary mixes of magnitudes.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Neumaier { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1], by Newton
/// iteration on the Legendre recurrence. Accurate to a few ulp for the
/// panel sizes used here (<= 64 points).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Tricomi-style initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..64 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Value and derivative of the degree-n Legendre polynomial at x.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    if n == 1 {
        return (x, 1.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panel edges on (0, upper], geometrically refined toward 0: the panel
/// nearest the origin has width upper / ratio^(panels-1). The returned
/// edges ascend and start at 0, so corner singularities of the integrand
/// sit at the boundary of the single smallest panel.
pub fn graded_edges(upper: f64, panels: usize, ratio: f64) -> Vec<f64> {
    assert!(upper > 0.0 && panels >= 1 && ratio > 1.0);
    let mut edges = Vec::with_capacity(panels + 1);
    edges.push(0.0);
    for k in (0..panels).rev() {
        edges.push(upper / ratio.powi(k as i32));
    }
    edges
}

/// Integrates f over (0, upper] with `panels` graded panels of `q`-point
/// Gauss-Legendre each, using precomputed reference nodes.
pub fn integrate_graded(
    f: &mut impl FnMut(f64) -> f64,
    upper: f64,
    nodes: &[f64],
    weights: &[f64],
    edges: &[f64],
) -> f64 {
    debug_assert!(upper > 0.0);
    let mut acc = Neumaier::new();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (&x, &wt) in nodes.iter().zip(weights) {
            acc.add(wt * half * f(mid + half * x));
        }
    }
    acc.value()
}
