//! Tanh-sinh (double-exponential) rule for integrands with algebraic
//! endpoint singularities.

use std::f64::consts::FRAC_PI_2;

/// One node on `[a, b]`: its distances to both ends (computed without
/// cancellation) and the weight.
#[derive(Clone, Copy, Debug)]
pub struct TsNode {
    pub from_a: f64,
    pub to_b: f64,
    pub w: f64,
}

/// Abscissae `u_j = j h` on `[-1, 1]` as `(1 + x, 1 - x, weight)`.
#[derive(Clone, Debug)]
pub struct TanhSinh {
    base: Vec<(f64, f64, f64)>,
}

impl TanhSinh {
    /// Step `h`; nodes are kept while both complements stay normal.
    pub fn new(h: f64) -> Self {
        let mut base = Vec::new();
        let mut j: i64 = 0;
        loop {
            let u = j as f64 * h;
            let s = FRAC_PI_2 * u.sinh();
            // 1 - tanh(s) = 2 / (1 + e^{2s})
            let one_minus = 2.0 / (1.0 + (2.0 * s).exp());
            let one_plus = 2.0 - one_minus;
            let cs = s.cosh();
            let w = h * FRAC_PI_2 * u.cosh() / (cs * cs);
            if one_minus < 1e-300 || w < 1e-300 {
                break;
            }
            base.push((one_plus, one_minus, w));
            if j > 0 {
                base.push((one_minus, one_plus, w));
            }
            j += 1;
        }
        TanhSinh { base }
    }

    /// Nodes on `[a, a + span]`; `span` is passed separately so it stays
    /// exact when `a + span` rounds.
    pub fn on_span(&self, span: f64) -> impl Iterator<Item = TsNode> + '_ {
        let half = 0.5 * span;
        self.base
            .iter()
            .map(move |&(p, m, w)| TsNode { from_a: half * p, to_b: half * m, w: half * w })
            .filter(|n| n.from_a > 0.0 && n.to_b > 0.0)
    }
}
