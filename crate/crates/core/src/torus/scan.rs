use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use super::{TranslationAction, NEAR_RESONANCE};

/// Finite-scale reading of the diophantine condition. None of these is a proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanVerdict {
    /// An exact integer relation `X_j·n = 0` for all `j` was found.
    Resonant,
    /// `K_hat` holds above a positive floor: `K_hat(⌊√N⌋) / K_hat(N) < 2`.
    DiophantineConsistent,
    /// `K_hat` keeps decaying through the scan.
    Failing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiophantineReport {
    pub tau: f64,
    pub radius: u64,
    /// `min_{0 < ‖n‖_∞ ≤ N} (Σ_j |X_j·n|²)^{1/2} ‖n‖_2^τ`.
    pub k_hat: f64,
    pub argmin: Vec<i64>,
    /// `decay[R − 1] = K_hat(R)`, non-increasing.
    pub decay: Vec<f64>,
    pub resonance: Option<Vec<i64>>,
    pub near_resonances: Vec<Vec<i64>>,
    pub verdict: ScanVerdict,
}

impl DiophantineReport {
    /// `K_hat(R)` for `1 ≤ R ≤ N`.
    pub fn k_hat_at(&self, r: u64) -> f64 {
        self.decay[(r - 1) as usize]
    }
}

const NEAR_CAP: usize = 32;

#[derive(Debug, Clone)]
struct ShellMin {
    value: f64,
    n: Vec<i64>,
    resonance: Option<Vec<i64>>,
    near: Vec<Vec<i64>>,
}

fn better(a: (f64, &[i64]), b: (f64, &[i64])) -> bool {
    match a.0.total_cmp(&b.0) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => a.1 < b.1,
    }
}

/// Visits one representative of each `±n` pair on the shell `‖n‖_∞ = r`:
/// the first coordinate of maximal modulus is `+r`.
pub(super) fn for_each_half_shell(d: usize, r: i64, mut f: impl FnMut(&[i64])) {
    let mut n = vec![0i64; d];
    for p in 0..d {
        let bounds: Vec<(i64, i64)> = (0..d)
            .map(|i| match i.cmp(&p) {
                Ordering::Less => (-(r - 1), r - 1),
                Ordering::Equal => (r, r),
                Ordering::Greater => (-r, r),
            })
            .collect();
        for (x, &(lo, _)) in n.iter_mut().zip(&bounds) {
            *x = lo;
        }
        'odometer: loop {
            f(&n);
            for i in (0..d).rev() {
                if n[i] < bounds[i].1 {
                    n[i] += 1;
                    for j in i + 1..d {
                        n[j] = bounds[j].0;
                    }
                    continue 'odometer;
                }
            }
            break;
        }
    }
}

/// `‖n‖² ↦ ‖n‖^τ`, avoiding `powf` for the common integer exponents.
pub(super) fn norm_power(tau: f64) -> impl Fn(f64) -> f64 {
    move |norm2: f64| {
        if tau == 1.0 {
            norm2.sqrt()
        } else if tau == 2.0 {
            norm2
        } else if tau == 0.0 {
            1.0
        } else {
            norm2.powf(tau / 2.0)
        }
    }
}

fn scan_shell(act: &TranslationAction, tau: f64, r: i64) -> ShellMin {
    let mut best = ShellMin { value: f64::INFINITY, n: Vec::new(), resonance: None, near: Vec::new() };
    let tiny = 1e-9 * act.scale();
    let weight = norm_power(tau);
    for_each_half_shell(act.d(), r, |n| {
        let norm2 = n.iter().map(|&x| (x * x) as f64).sum::<f64>();
        let norm = norm2.sqrt();
        let mut div = act
            .generators()
            .iter()
            .map(|x| x.iter().zip(n).map(|(a, &m)| a * m as f64).sum::<f64>().powi(2))
            .sum::<f64>()
            .sqrt();
        if div <= tiny * norm && act.is_resonant(n) {
            div = 0.0;
            if best.resonance.as_deref().is_none_or(|cur| n < cur) {
                best.resonance = Some(n.to_vec());
            }
        } else if div < NEAR_RESONANCE * norm && best.near.len() < NEAR_CAP {
            best.near.push(n.to_vec());
        }
        let value = div * weight(norm2);
        if better((value, n), (best.value, &best.n)) {
            best.value = value;
            best.n = n.to_vec();
        }
    });
    best
}

/// Exhaustive scan of `0 < ‖n‖_∞ ≤ N`. Shells run in parallel; the
/// reduction is a total order on `(value, n)`, so the report does not
/// depend on scheduling.
pub fn diophantine_scan(act: &TranslationAction, tau: f64, radius: u64) -> DiophantineReport {
    assert!(radius >= 1, "scan radius must be at least 1");
    let shells: Vec<ShellMin> = (1..=radius as i64).into_par_iter().map(|r| scan_shell(act, tau, r)).collect();

    let mut decay = Vec::with_capacity(shells.len());
    let mut k_hat = f64::INFINITY;
    let mut argmin: Vec<i64> = Vec::new();
    let mut resonance = None;
    let mut near_resonances = Vec::new();
    for s in &shells {
        // ties across shells keep the smaller radius
        if s.value < k_hat {
            k_hat = s.value;
            argmin = s.n.clone();
        }
        decay.push(k_hat);
        if resonance.is_none() {
            resonance = s.resonance.clone();
        }
        for n in &s.near {
            if near_resonances.len() < NEAR_CAP {
                near_resonances.push(n.clone());
            }
        }
    }

    let verdict = if resonance.is_some() {
        ScanVerdict::Resonant
    } else {
        let early = decay[((radius as f64).sqrt().floor() as usize).max(1) - 1];
        if k_hat > 0.0 && early / k_hat < 2.0 {
            ScanVerdict::DiophantineConsistent
        } else {
            ScanVerdict::Failing
        }
    };
    DiophantineReport { tau, radius, k_hat, argmin, decay, resonance, near_resonances, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::euclidean_norm;

    fn shell_points(d: usize, r: i64) -> Vec<Vec<i64>> {
        let mut v = Vec::new();
        for_each_half_shell(d, r, |n| v.push(n.to_vec()));
        v
    }

    #[test]
    fn half_shell_enumeration() {
        for d in 1..=4 {
            for r in 1..=4i64 {
                let pts = shell_points(d, r);
                // brute force: all n with ‖n‖_∞ = r, one of each ±n pair
                let total = (2 * r + 1).pow(d as u32) - (2 * r - 1).pow(d as u32);
                assert_eq!(pts.len() as i64, total / 2, "d={d} r={r}");
                let mut sorted = pts.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), pts.len());
                for n in &pts {
                    assert_eq!(n.iter().map(|x| x.abs()).max().unwrap(), r);
                    let neg: Vec<i64> = n.iter().map(|x| -x).collect();
                    assert!(!pts.contains(&neg));
                }
            }
        }
    }

    #[test]
    fn rational_half_resonance() {
        let rep = diophantine_scan(&TranslationAction::rational_half(), 1.0, 5);
        assert_eq!(rep.k_hat, 0.0);
        // canonical representative of ±(1, −2): first maximal coordinate positive
        assert_eq!(rep.resonance, Some(vec![-1, 2]));
        assert_eq!(rep.argmin, vec![-1, 2]);
        assert_eq!(rep.verdict, ScanVerdict::Resonant);
        // R = 1: minimum is |X·(0, 1)| = 1/2
        assert_eq!(rep.decay[0], 0.5);
    }

    #[test]
    fn decay_is_monotone_and_matches_brute_force() {
        let act = TranslationAction::golden();
        let rep = diophantine_scan(&act, 1.0, 40);
        assert!(rep.decay.windows(2).all(|w| w[1] <= w[0]));
        let mut best = f64::INFINITY;
        for a in -40i64..=40 {
            for b in -40i64..=40 {
                if a == 0 && b == 0 {
                    continue;
                }
                let n = [a, b];
                best = best.min(act.divisor_norm(&n) * euclidean_norm(&n));
            }
        }
        assert!((rep.k_hat - best).abs() < 1e-12);
        assert_eq!(rep.verdict, ScanVerdict::DiophantineConsistent);
    }
}
