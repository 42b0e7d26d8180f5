//! Uniform tuple samples and sample-side acceptance.
//!
//! On a sample `J` the violation rate `p` of a DC is estimated by
//! `p̂ = |E_J| / n` with `n = |J|(|J|-1)` ordered pairs. A DC is accepted when
//! `1 - p̂ >= z_{1-2α}·sqrt(p̂(1-p̂)/n) + (1 - ε)`, that is when the lower end of
//! the normal confidence interval for `f1` clears `1 - ε`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::approx::ApproxFunction;
use crate::bitset::PredicateSet;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::evidence::EvidenceSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    pub fraction: f64,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(fraction: f64, seed: u64) -> Result<Self> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "sample",
                reason: "fraction must lie in (0, 1]",
            });
        }
        Ok(SampleSpec { fraction, seed })
    }

    /// `round(fraction · rows)`.
    pub fn sample_size(&self, rows: usize) -> usize {
        libm::round(self.fraction * rows as f64) as usize
    }
}

/// Row indices of a uniform sample without replacement, ascending.
pub fn sample_indices(rows: usize, spec: &SampleSpec) -> Result<Vec<usize>> {
    let m = spec.sample_size(rows).min(rows);
    if m < 2 {
        return Err(Error::SampleTooSmall { requested: m });
    }
    let mut idx: Vec<usize> = (0..rows).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for i in 0..m {
        let j = rng.random_range(i..rows);
        idx.swap(i, j);
    }
    idx.truncate(m);
    idx.sort_unstable();
    Ok(idx)
}

/// The sampled sub-relation, rows kept in their original order.
pub fn draw_sample(d: &Dataset, spec: &SampleSpec) -> Result<Dataset> {
    Ok(d.subset(&sample_indices(d.row_count(), spec)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub p_hat: f64,
    /// Ordered pair count of the sample.
    pub n: u64,
    /// Violating ordered pairs in the sample.
    pub violations: u64,
}

impl Estimate {
    pub fn new(violations: u64, n: u64) -> Self {
        Estimate {
            p_hat: if n == 0 { 0.0 } else { violations as f64 / n as f64 },
            n,
            violations,
        }
    }
}

/// `p̂` for the DC of hitting set `h`, from the sample's evidence.
pub fn estimate_p(sample: &EvidenceSet, h: &PredicateSet) -> Estimate {
    Estimate::new(sample.uncovered_weight(h), sample.pair_universe())
}

/// Chebyshev bound on `Pr(|p̂ - p| > a)` for a sample of `n_nodes` tuples.
pub fn chebyshev_tail_bound(p: f64, n_nodes: usize, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter {
            name: "a",
            reason: "must be positive",
        });
    }
    if n_nodes < 2 {
        return Err(Error::InvalidParameter {
            name: "n_nodes",
            reason: "at least two tuples are needed",
        });
    }
    let nf = n_nodes as f64;
    let c = nf * (nf - 1.0) / 2.0;
    let bound = p / (a * a) * ((c + c * (c - 1.0) / 2.0) / (c * c) - p);
    Ok(bound.clamp(0.0, 1.0))
}

/// Inverse standard normal CDF (Wichura's AS241, about 1e-16 relative
/// accuracy). Returns ±infinity at 0 and 1 and NaN outside `[0, 1]`.
pub fn z_quantile(q: f64) -> f64 {
    if q.is_nan() || !(0.0..=1.0).contains(&q) {
        return f64::NAN;
    }
    if q == 0.0 {
        return f64::NEG_INFINITY;
    }
    if q == 1.0 {
        return f64::INFINITY;
    }
    let x = q - 0.5;
    if x.abs() <= 0.425 {
        let r = 0.180625 - x * x;
        return x
            * (((((((2509.080_928_730_122_7 * r + 33430.575_583_588_128) * r + 67265.770_927_008_7)
                * r
                + 45921.953_931_549_87)
                * r
                + 13731.693_765_509_461)
                * r
                + 1971.590_950_306_551_3)
                * r
                + 133.141_667_891_784_38)
                * r
                + 3.387_132_872_796_366_5)
            / (((((((5226.495_278_852_545 * r + 28729.085_735_721_943) * r + 39307.895_800_092_71)
                * r
                + 21213.794_301_586_597)
                * r
                + 5394.196_021_424_751)
                * r
                + 687.187_007_492_057_9)
                * r
                + 42.313_330_701_600_91)
                * r
                + 1.0);
    }
    let tail = if x < 0.0 { q } else { 1.0 - q };
    let mut r = libm::sqrt(-libm::log(tail));
    let z = if r <= 5.0 {
        r -= 1.6;
        (((((((7.745_450_142_783_414e-4 * r + 0.022_723_844_989_269_184) * r + 0.241_780_725_177_450_6)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_546)
            * r
            + 1.423_437_110_749_683_5)
            / (((((((1.050_750_071_644_416_9e-9 * r + 5.475_938_084_995_345e-4) * r
                + 0.015_198_666_563_616_457)
                * r
                + 0.148_103_976_427_480_08)
                * r
                + 0.689_767_334_985_1)
                * r
                + 1.676_384_830_183_803_8)
                * r
                + 2.053_191_626_637_759)
                * r
                + 1.0)
    } else {
        r -= 5.0;
        (((((((2.010_334_399_292_288_1e-7 * r + 2.711_555_568_743_487_6e-5) * r
            + 0.001_242_660_947_388_078_4)
            * r
            + 0.026_532_189_526_576_124)
            * r
            + 0.296_560_571_828_504_9)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103)
            / (((((((2.044_263_103_389_939_7e-15 * r + 1.421_511_758_316_446e-7) * r
                + 1.846_318_317_510_054_8e-5)
                * r
                + 7.868_691_311_456_133e-4)
                * r
                + 0.014_875_361_290_850_615)
                * r
                + 0.136_929_880_922_735_8)
                * r
                + 0.599_832_206_555_888)
                * r
                + 1.0)
    };
    if x < 0.0 {
        -z
    } else {
        z
    }
}

/// Validates a significance level `alpha ∈ (0, 0.5)`.
pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            reason: "must lie in (0, 0.5)",
        })
    }
}

/// `z_{1-2α} · sqrt(p̂(1-p̂)/n)`; zero when `p̂ ∈ {0, 1}` or `n = 0`.
pub fn normal_ci_halfwidth(p_hat: f64, n: u64, alpha: f64) -> f64 {
    let var = p_hat * (1.0 - p_hat);
    if var <= 0.0 || n == 0 {
        return 0.0;
    }
    z_quantile(1.0 - 2.0 * alpha) * libm::sqrt(var / n as f64)
}

/// `1 - p̂ >= halfwidth + (1 - ε)`.
pub fn accept_on_sample(est: &Estimate, epsilon: f64, alpha: f64) -> bool {
    1.0 - est.p_hat >= normal_ci_halfwidth(est.p_hat, est.n, alpha) + (1.0 - epsilon)
}

/// `f1' = (1 - p̂) - z_{1-2α}·sqrt(p̂(1-p̂)/n)` on a sample's evidence.
///
/// Acceptance follows [`accept_on_sample`]. Branch pruning uses plain `f1`
/// on the sample, since `f1'` is not known to be monotone.
#[derive(Debug, Clone, Copy)]
pub struct AdjustedPairFraction<'a> {
    evidence: &'a EvidenceSet,
    alpha: f64,
}

impl<'a> AdjustedPairFraction<'a> {
    pub fn new(evidence: &'a EvidenceSet, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if evidence.pair_universe() == 0 {
            return Err(Error::EmptyPairUniverse);
        }
        Ok(AdjustedPairFraction { evidence, alpha })
    }

    pub fn estimate(&self, uncovered: &[usize]) -> Estimate {
        Estimate::new(self.evidence.weight_of(uncovered), self.evidence.pair_universe())
    }

    /// `f1'` for the candidate leaving `uncovered` unhit.
    pub fn score(&self, uncovered: &[usize]) -> f64 {
        let est = self.estimate(uncovered);
        (1.0 - est.p_hat) - normal_ci_halfwidth(est.p_hat, est.n, self.alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl ApproxFunction for AdjustedPairFraction<'_> {
    fn violation(&self, uncovered: &[usize]) -> f64 {
        1.0 - self.score(uncovered)
    }

    fn accepts(&self, uncovered: &[usize], epsilon: f64) -> bool {
        accept_on_sample(&self.estimate(uncovered), epsilon, self.alpha)
    }

    fn prune_accepts(&self, uncovered: &[usize], epsilon: f64) -> bool {
        self.estimate(uncovered).p_hat <= epsilon
    }
}
