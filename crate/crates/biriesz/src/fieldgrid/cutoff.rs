/// C^∞ step: 0 for t ≤ 0, 1 for t ≥ 1, built from ψ(t) = e^{-1/t}.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

/// Dyadic Littlewood-Paley profile: β = 1 on [0, plateau], 0 on [cutoff, ∞),
/// φ(t) = β(|t|) - β(2|t|) and φ₀ = β.
///
/// Σ_{ℓ≥1} φ(2^{-ℓ}λ) + φ₀(λ) telescopes to 1 exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicPartition {
    plateau: f64,
    cutoff: f64,
}

impl DyadicPartition {
    /// Requires 1/2 ≤ plateau < cutoff ≤ 1 so that supp φ ⊆ [1/4, 1].
    pub fn new(plateau: f64, cutoff: f64) -> crate::Result<Self> {
        if !(0.5 <= plateau && plateau < cutoff && cutoff <= 1.0) {
            return Err(crate::error::invalid(format!(
                "partition needs 1/2 <= plateau < cutoff <= 1, got ({plateau}, {cutoff})"
            )));
        }
        Ok(Self { plateau, cutoff })
    }

    pub fn beta(&self, t: f64) -> f64 {
        1.0 - smooth_step((t.abs() - self.plateau) / (self.cutoff - self.plateau))
    }

    pub fn phi(&self, t: f64) -> f64 {
        self.beta(t) - self.beta(2.0 * t)
    }

    pub fn phi0(&self, t: f64) -> f64 {
        self.beta(t)
    }

    /// Window of piece ℓ at frequency radius r: φ₀(r) for ℓ = 0, φ(2^{-ℓ}r) otherwise.
    pub fn window(&self, ell: u32, r: f64) -> f64 {
        if ell == 0 {
            self.phi0(r)
        } else {
            self.phi(r / 2f64.powi(ell as i32))
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (0.5 * self.plateau, self.cutoff)
    }
}

/// The widest admissible partition: transitions on [1/4, 1/2] and [1/2, 1].
pub fn make_partition_phi() -> DyadicPartition {
    DyadicPartition {
        plateau: 0.5,
        cutoff: 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_of_unity() {
        let phi = make_partition_phi();
        for &lam in &[0.37, 1e-3, 5.0, 123.456, 0.25, 1.0] {
            let sum: f64 = (-30..=30).map(|l| phi.phi(lam * 2f64.powi(-l))).sum();
            assert!((sum - 1.0).abs() < 1e-12, "λ = {lam}");
            let sum: f64 = phi.phi0(lam) + (1..=40).map(|l| phi.window(l, lam)).sum::<f64>();
            assert!((sum - 1.0).abs() < 1e-12);
        }
        assert_eq!(phi.phi(0.1), 0.0);
        assert_eq!(phi.phi(1.0), 0.0);
    }

    #[test]
    fn at_most_three_active_scales() {
        let phi = make_partition_phi();
        for i in 1..2000 {
            let lam = i as f64 * 0.0137;
            let active: Vec<i32> = (-30..=30)
                .filter(|&l| phi.phi(lam * 2f64.powi(-l)) != 0.0)
                .collect();
            assert!(active.len() <= 3);
            assert!(active.windows(2).all(|w| w[1] == w[0] + 1));
        }
    }
}
