//! Euclidean picture of the coherence decomposition: four reference states
//! placed in 3D so that their pairwise distances are the coherences.

use serde::{Deserialize, Serialize};

use super::CoherenceReport;

/// Lengths below this are treated as zero when they appear in a denominator.
pub const EMBED_EPS: f64 = 1e-9;

/// Vertex coordinates in the gauge `ρ = 0`, `[π(ρ)]_d` on the x-axis and
/// `π(ρ)` in the xy-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tetrahedron {
    pub rho: [f64; 3],
    pub pi_dephased: [f64; 3],
    pub pi: [f64; 3],
    pub split_1_23: [f64; 3],
    /// Largest mismatch between an edge length and its coherence.
    pub residual: f64,
}

fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Cosine of the angle at a vertex with adjacent edges `a`, `b` and opposite
/// edge `c`, or `None` when an adjacent edge vanishes.
fn law_of_cosines(a: f64, b: f64, c: f64) -> Option<f64> {
    (a >= EMBED_EPS && b >= EMBED_EPS).then(|| ((a * a + b * b - c * c) / (2.0 * a * b)).clamp(-1.0, 1.0))
}

impl Tetrahedron {
    /// `(vertex pair, target length)` for the six edges.
    pub fn edges(&self, report: &CoherenceReport) -> [(f64, f64); 6] {
        [
            (distance(self.rho, self.pi_dephased), report.c_absolute),
            (distance(self.rho, self.pi), report.c_global),
            (distance(self.pi, self.pi_dephased), report.c_local),
            (distance(self.rho, self.split_1_23), report.c_1_23),
            (distance(self.split_1_23, self.pi_dephased), report.c_abs_1_23),
            (distance(self.split_1_23, self.pi), report.c_2_3),
        ]
    }

    /// Recomputes the worst edge mismatch from the coordinates.
    pub fn edge_mismatch(&self, report: &CoherenceReport) -> f64 {
        self.edges(report)
            .iter()
            .map(|(got, want)| (got - want).abs())
            .fold(0.0, f64::max)
    }
}

/// Places the four states using the law of cosines. `D(ρ₁⊗ρ₂₃, π(ρ))` is
/// taken to be `C_{2:3}`.
///
/// Cosines are clamped to `[-1, 1]`, so a report whose distances are not
/// exactly realizable in 3D still embeds; the residual records by how much.
pub fn embed_tetrahedron(report: &CoherenceReport) -> Tetrahedron {
    let ca = report.c_absolute;
    let cg = report.c_global;
    let cl = report.c_local;
    let c123 = report.c_1_23;
    let ca123 = report.c_abs_1_23;
    let c23 = report.c_2_3;

    let rho = [0.0; 3];
    let pi_dephased = [ca, 0.0, 0.0];

    let cos_theta = law_of_cosines(ca, cg, cl).unwrap_or(1.0);
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    let pi = [cg * cos_theta, cg * sin_theta, 0.0];

    let cos_phi = law_of_cosines(ca, c123, ca123).unwrap_or(1.0);
    let sin_phi = (1.0 - cos_phi * cos_phi).max(0.0).sqrt();
    // angle at ρ between the π(ρ) and ρ₁⊗ρ₂₃ edges
    let cos_psi = law_of_cosines(cg, c123, c23);
    let cos_xi = match cos_psi {
        Some(cp) if sin_phi * sin_theta >= EMBED_EPS => {
            ((cp - cos_phi * cos_theta) / (sin_phi * sin_theta)).clamp(-1.0, 1.0)
        }
        _ => 1.0,
    };
    let sin_xi = (1.0 - cos_xi * cos_xi).max(0.0).sqrt();
    let split_1_23 = [
        c123 * cos_phi,
        c123 * sin_phi * cos_xi,
        c123 * sin_phi * sin_xi,
    ];

    let mut t = Tetrahedron {
        rho,
        pi_dephased,
        pi,
        split_1_23,
        residual: 0.0,
    };
    t.residual = t.edge_mismatch(report);
    t
}
