/// Lower and upper edge of the usual gaussian width band. Values outside are
/// accepted with a warning; there is no data-driven rule tying gamma to scale.
pub const GAMMA_BAND: (f64, f64) = (0.01, 0.1);

/// Midpoint of [`GAMMA_BAND`], used when no width is given.
pub const GAMMA_DEFAULT: f64 = 0.05;

/// Kernel family. `Linear` and `Poly2` carry no parameters; `Gaussian` holds
/// the width gamma of exp(-gamma * ||s - x||^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Linear,
    Poly2,
    Gaussian { gamma: f64 },
}

impl KernelSpec {
    /// Gaussian kernel with the given width. Widths outside [`GAMMA_BAND`]
    /// are kept as-is but logged, since nothing in the formulation forbids
    /// them; they just tend to under- or over-smooth.
    pub fn gaussian(gamma: f64) -> Self {
        assert!(gamma > 0.0, "gaussian width must be positive, got {gamma}");
        if !(GAMMA_BAND.0..=GAMMA_BAND.1).contains(&gamma) {
            log::warn!(
                "gaussian gamma {gamma} lies outside the usual band [{}, {}]",
                GAMMA_BAND.0,
                GAMMA_BAND.1
            );
        }
        KernelSpec::Gaussian { gamma }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            KernelSpec::Linear => "linear",
            KernelSpec::Poly2 => "poly2",
            KernelSpec::Gaussian { .. } => "gaussian",
        }
    }
}

#[inline]
fn dot(s: &[f64], x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for k in 0..s.len() {
        acc += s[k] * x[k];
    }
    acc
}

/// Evaluate k_x(s) for the given family: s'x, (s'x + 1)^2, or
/// exp(-gamma * ||s - x||^2). Symmetric in its two arguments.
///
/// Panics when the two vectors differ in dimension.
pub fn eval_kernel(spec: KernelSpec, s: &[f64], x: &[f64]) -> f64 {
    assert_eq!(
        s.len(),
        x.len(),
        "kernel arguments differ in dimension: {} vs {}",
        s.len(),
        x.len()
    );
    match spec {
        KernelSpec::Linear => dot(s, x),
        KernelSpec::Poly2 => {
            let t = dot(s, x) + 1.0;
            t * t
        }
        KernelSpec::Gaussian { gamma } => {
            let mut sq = 0.0;
            for k in 0..s.len() {
                let d = s[k] - x[k];
                sq += d * d;
            }
            (-gamma * sq).exp()
        }
    }
}
