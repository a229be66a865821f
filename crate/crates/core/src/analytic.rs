//! Sign-case analysis of one-step expectation changes.
//!
//! With `a = (1, 1)`, a change `(Δr1, Δr2)` in lagged returns moves the
//! expected returns by `(Δr1 + b1·Δr2, Δr2 + b2·Δr1)`. For each sign regime
//! of `(b1, b2)` and each input quadrant, [`classify`] states which output
//! quadrants can occur and under what magnitude condition. The verdicts are
//! a fixed table; [`verify`] checks every entry against a sampler.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::seed::{stream, StreamLabel};
use crate::types::{SignBit, Stock};

/// Sign regime of the coupling pair, each component in an open unit
/// interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `b1, b2 ∈ (0, 1)`.
    I,
    /// `b1, b2 ∈ (−1, 0)`.
    II,
    /// `b1 ∈ (0, 1)`, `b2 ∈ (−1, 0)`.
    III,
    /// `b1 ∈ (−1, 0)`, `b2 ∈ (0, 1)`.
    IV,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::I, Regime::II, Regime::III, Regime::IV];

    /// Signs of `(b1, b2)`.
    pub fn signs(self) -> (SignBit, SignBit) {
        use SignBit::*;
        match self {
            Regime::I => (Plus, Plus),
            Regime::II => (Minus, Minus),
            Regime::III => (Plus, Minus),
            Regime::IV => (Minus, Plus),
        }
    }

    /// The regime whose open box contains `b`, if any.
    pub fn of(b: (f64, f64)) -> Option<Regime> {
        Regime::ALL.into_iter().find(|r| r.contains(b))
    }

    pub fn contains(self, (b1, b2): (f64, f64)) -> bool {
        let inside = |b: f64, s: SignBit| {
            b.abs() < 1.0
                && match s {
                    SignBit::Plus => b > 0.0,
                    SignBit::Minus => b < 0.0,
                }
        };
        let (s1, s2) = self.signs();
        inside(b1, s1) && inside(b2, s2)
    }

    /// The regime seen after swapping the stock labels.
    pub fn relabeled(self) -> Regime {
        match self {
            Regime::III => Regime::IV,
            Regime::IV => Regime::III,
            r => r,
        }
    }

    /// `b` with the given magnitudes and this regime's signs.
    pub fn coupling(self, magnitude: (f64, f64)) -> (f64, f64) {
        let (s1, s2) = self.signs();
        (s1.bit_sign() * magnitude.0, s2.bit_sign() * magnitude.1)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::I => "I",
            Regime::II => "II",
            Regime::III => "III",
            Regime::IV => "IV",
        })
    }
}

trait BitSign {
    fn bit_sign(self) -> f64;
}

impl BitSign for SignBit {
    fn bit_sign(self) -> f64 {
        match self {
            SignBit::Plus => 1.0,
            SignBit::Minus => -1.0,
        }
    }
}

/// Signs of a pair of changes, stock 1 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quadrant(pub SignBit, pub SignBit);

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [
        Quadrant(SignBit::Plus, SignBit::Plus),
        Quadrant(SignBit::Plus, SignBit::Minus),
        Quadrant(SignBit::Minus, SignBit::Plus),
        Quadrant(SignBit::Minus, SignBit::Minus),
    ];

    pub fn of(x: f64, y: f64) -> Quadrant {
        Quadrant(SignBit::of(x), SignBit::of(y))
    }

    /// Position in [`Quadrant::ALL`].
    pub fn index(self) -> usize {
        self.0.bit() * 2 + self.1.bit()
    }

    pub fn swapped(self) -> Quadrant {
        Quadrant(self.1, self.0)
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |s: SignBit| if s == SignBit::Plus { '+' } else { '-' };
        write!(f, "({},{})", c(self.0), c(self.1))
    }
}

/// `(a1·dr1 + b1·dr2, a2·dr2 + b2·dr1)`.
pub fn expectation_delta(a: (f64, f64), b: (f64, f64), dr: (f64, f64)) -> (f64, f64) {
    (a.0 * dr.0 + b.0 * dr.1, a.1 * dr.1 + b.1 * dr.0)
}

/// A magnitude condition on one stock's change relative to the other's:
/// `|Δr_j| > |b_j|·|Δr_other|` when `exceeds`, else `<`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub stock: Stock,
    pub exceeds: bool,
}

impl Constraint {
    pub fn holds(self, b: (f64, f64), dr: (f64, f64)) -> bool {
        let (own, other, coef) = match self.stock {
            Stock::One => (dr.0, dr.1, b.0),
            Stock::Two => (dr.1, dr.0, b.1),
        };
        let bound = coef.abs() * other.abs();
        if self.exceeds {
            own.abs() > bound
        } else {
            own.abs() < bound
        }
    }

    /// Direction in which the probability of the condition moves as
    /// `|b_j| → 1`.
    pub fn trend(self) -> Trend {
        if self.exceeds {
            Trend::Decreasing
        } else {
            Trend::Increasing
        }
    }

    fn relabeled(self) -> Constraint {
        Constraint {
            stock: self.stock.other(),
            exceeds: self.exceeds,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (j, k) = match self.stock {
            Stock::One => (1, 2),
            Stock::Two => (2, 1),
        };
        let op = if self.exceeds { '>' } else { '<' };
        write!(f, "|dr{j}| {op} |b{j}|*|dr{k}|")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trend {
    Increasing,
    Decreasing,
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Trend::Increasing => "increasing",
            Trend::Decreasing => "decreasing",
        })
    }
}

/// Whether an output quadrant can follow an input quadrant, and when.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    /// All conditions must hold. Empty for a feasible verdict means the
    /// output is certain; always empty when infeasible.
    pub condition: Vec<Constraint>,
}

impl FeasibilityVerdict {
    fn infeasible() -> Self {
        FeasibilityVerdict {
            feasible: false,
            condition: Vec::new(),
        }
    }

    /// Feasible with no condition: the input forces this output.
    pub fn is_certain(&self) -> bool {
        self.feasible && self.condition.is_empty()
    }

    /// How the probability moves as `|b_j| → 1`, for the coefficient of
    /// `stock`; `None` if the verdict does not depend on it.
    pub fn trend(&self, stock: Stock) -> Option<Trend> {
        self.condition
            .iter()
            .find(|c| c.stock == stock)
            .map(|c| c.trend())
    }

    pub fn describe(&self) -> String {
        if !self.feasible {
            "infeasible".into()
        } else if self.condition.is_empty() {
            "always".into()
        } else {
            self.condition
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" and ")
        }
    }

    fn relabeled(&self) -> Self {
        let mut condition: Vec<_> = self.condition.iter().map(|c| c.relabeled()).collect();
        condition.sort_by_key(|c| c.stock.index());
        FeasibilityVerdict {
            feasible: self.feasible,
            condition,
        }
    }
}

// Compact form of the verdict table. Per regime and input quadrant, one
// code per output quadrant in `Quadrant::ALL` order: `-` infeasible, else
// two letters for stocks 1 and 2: `A` no condition, `D` the stock's change
// must exceed the coupled term, `S` it must fall short of it. A `D`
// paired with an `S` is implied by the `S` (since |b| < 1 < 1/|b|) and is
// written as `A`.
const TABLE: [(Regime, [&str; 4]); 4] = [
    (Regime::I, ["AA - - -", "AS DD - SA", "SA - DD AS", "- - - AA"]),
    (Regime::II, ["DD AS SA -", "- AA - -", "- - AA -", "- SA AS DD"]),
    (Regime::III, ["AD AS - -", "- DA - SA", "SA - DA -", "- - AS AD"]),
    (Regime::IV, ["DA - SA -", "AS AD - -", "- - AD AS", "- SA - DA"]),
];

/// Feasibility of moving from `input` to `output` under `regime`, with
/// `a = (1, 1)`.
pub fn classify(regime: Regime, input: Quadrant, output: Quadrant) -> FeasibilityVerdict {
    let row = TABLE.iter().find(|(r, _)| *r == regime).expect("every regime is tabulated").1;
    let code = row[input.index()]
        .split_whitespace()
        .nth(output.index())
        .expect("four outputs per row");
    if code == "-" {
        return FeasibilityVerdict::infeasible();
    }
    let condition = code
        .chars()
        .zip(Stock::BOTH)
        .filter_map(|(c, stock)| match c {
            'A' => None,
            'D' => Some(Constraint { stock, exceeds: true }),
            'S' => Some(Constraint { stock, exceeds: false }),
            _ => unreachable!("bad table code {c}"),
        })
        .collect();
    FeasibilityVerdict {
        feasible: true,
        condition,
    }
}

/// [`classify`] for an arbitrary `a`; only `(1, 1)` is supported.
pub fn classify_with(a: (f64, f64), regime: Regime, input: Quadrant, output: Quadrant) -> Result<FeasibilityVerdict> {
    if a != (1.0, 1.0) {
        return Err(Error::UnsupportedOwnWeight(a.0, a.1));
    }
    Ok(classify(regime, input, output))
}

/// Output-quadrant frequencies, in [`Quadrant::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrantFrequencies {
    pub counts: [u64; 4],
    pub n: u64,
}

impl QuadrantFrequencies {
    pub fn frequency(&self, q: Quadrant) -> f64 {
        self.counts[q.index()] as f64 / self.n as f64
    }

    pub fn count(&self, q: Quadrant) -> u64 {
        self.counts[q.index()]
    }
}

/// Draws `(Δr1, Δr2)` with magnitudes uniform on `(0, 1]` and the signs of
/// `input`, and tallies the quadrant of the expectation change at
/// `a = (1, 1)`.
pub fn brute_force_feasibility<R: Rng + ?Sized>(
    regime: Regime,
    b: (f64, f64),
    input: Quadrant,
    n_samples: u64,
    rng: &mut R,
) -> Result<QuadrantFrequencies> {
    if !regime.contains(b) {
        return Err(Error::OutsideRegime(b.0, b.1));
    }
    let (sx, sy) = (input.0.bit_sign(), input.1.bit_sign());
    let mut counts = [0u64; 4];
    for _ in 0..n_samples {
        let x = sx * (1.0 - rng.gen::<f64>());
        let y = sy * (1.0 - rng.gen::<f64>());
        let (e1, e2) = expectation_delta((1.0, 1.0), b, (x, y));
        counts[Quadrant::of(e1, e2).index()] += 1;
    }
    Ok(QuadrantFrequencies { counts, n: n_samples })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrelationSign {
    Positive,
    Negative,
    Weak,
}

impl fmt::Display for CorrelationSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorrelationSign::Positive => "positive",
            CorrelationSign::Negative => "negative",
            CorrelationSign::Weak => "weak",
        })
    }
}

/// Components closer to zero than this count as uncoupled.
pub const WEAK_COUPLING: f64 = 0.1;

/// Expected sign of the return correlation for a coupling pair or a pair
/// of distribution centers.
pub fn predict_correlation_sign((b1, b2): (f64, f64)) -> CorrelationSign {
    if b1.abs() < WEAK_COUPLING || b2.abs() < WEAK_COUPLING {
        CorrelationSign::Weak
    } else if b1 > 0.0 && b2 > 0.0 {
        CorrelationSign::Positive
    } else if b1 < 0.0 && b2 < 0.0 {
        CorrelationSign::Negative
    } else {
        CorrelationSign::Weak
    }
}

/// Coupling magnitudes at which verdicts are compared with the sampler.
pub const CHECK_MAGNITUDES: [f64; 3] = [0.1, 0.5, 0.9];
/// Magnitudes a trend is walked over, with the other coefficient at 0.5.
pub const TREND_MAGNITUDES: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

/// Outcome of checking one `(regime, input, output)` verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct CellCheck {
    pub regime: Regime,
    pub input: Quadrant,
    pub output: Quadrant,
    pub verdict: FeasibilityVerdict,
    /// Smallest and largest sampled frequency over the check grid.
    pub min_frequency: f64,
    pub max_frequency: f64,
    /// Zero frequency exactly where the verdict says infeasible, and
    /// frequency one wherever it says certain.
    pub agrees: bool,
    /// Every declared trend is strictly monotone over its walk.
    pub trends_hold: bool,
}

impl CellCheck {
    pub fn passed(&self) -> bool {
        self.agrees && self.trends_hold
    }

    /// Declared trends as `b1:…;b2:…`, or `none`.
    pub fn trend_label(&self) -> String {
        let parts: Vec<String> = Stock::BOTH
            .iter()
            .filter_map(|&s| self.verdict.trend(s).map(|t| format!("b{}:{t}", s.number())))
            .collect();
        if parts.is_empty() {
            "none".into()
        } else {
            parts.join(";")
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub n_samples: u64,
    pub cells: Vec<CellCheck>,
    /// IV verdicts equal III verdicts with stocks relabeled.
    pub symmetric: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.symmetric && self.cells.iter().all(CellCheck::passed)
    }
}

/// Every verdict under stock relabeling maps onto the relabeled regime's.
pub fn relabel_symmetric() -> bool {
    Regime::ALL.iter().all(|&r| {
        Quadrant::ALL.iter().all(|&i| {
            Quadrant::ALL
                .iter()
                .all(|&o| classify(r, i, o).relabeled() == classify(r.relabeled(), i.swapped(), o.swapped()))
        })
    })
}

/// Checks every verdict of [`classify`] against [`brute_force_feasibility`]
/// with `n_samples` draws per coupling. All couplings of one
/// `(regime, input)` reuse one stream, so the walks compare like with like.
pub fn verify(n_samples: u64, master_seed: u64) -> VerificationReport {
    let jobs: Vec<(usize, Regime, Quadrant)> = Regime::ALL
        .iter()
        .flat_map(|&r| Quadrant::ALL.map(move |q| (r, q)))
        .enumerate()
        .map(|(k, (r, q))| (k, r, q))
        .collect();
    let mut cells: Vec<CellCheck> = jobs
        .par_iter()
        .flat_map_iter(|&(k, regime, input)| check_input(regime, input, n_samples, master_seed, k as u64))
        .collect();
    cells.sort_by_key(|c| {
        (
            Regime::ALL.iter().position(|&r| r == c.regime),
            c.input.index(),
            c.output.index(),
        )
    });
    VerificationReport {
        n_samples,
        cells,
        symmetric: relabel_symmetric(),
    }
}

fn check_input(regime: Regime, input: Quadrant, n: u64, master_seed: u64, run: u64) -> Vec<CellCheck> {
    let sample = |mag: (f64, f64)| {
        let mut rng = stream(master_seed, run, StreamLabel::Analysis(0));
        brute_force_feasibility(regime, regime.coupling(mag), input, n, &mut rng).expect("magnitudes lie inside the regime")
    };
    let grid: Vec<QuadrantFrequencies> = CHECK_MAGNITUDES
        .iter()
        .flat_map(|&m1| CHECK_MAGNITUDES.map(|m2| (m1, m2)))
        .map(sample)
        .collect();
    let walks: [Vec<QuadrantFrequencies>; 2] = [
        TREND_MAGNITUDES.iter().map(|&m| sample((m, 0.5))).collect(),
        TREND_MAGNITUDES.iter().map(|&m| sample((0.5, m))).collect(),
    ];

    Quadrant::ALL
        .iter()
        .map(|&output| {
            let verdict = classify(regime, input, output);
            let freqs: Vec<f64> = grid.iter().map(|g| g.frequency(output)).collect();
            let agrees = grid.iter().all(|g| {
                let c = g.count(output);
                if !verdict.feasible {
                    c == 0
                } else if verdict.is_certain() {
                    c == g.n
                } else {
                    c > 0 && c < g.n
                }
            });
            let trends_hold = Stock::BOTH.iter().all(|&s| match verdict.trend(s) {
                None => true,
                Some(t) => {
                    let walk: Vec<f64> = walks[s.index()].iter().map(|g| g.frequency(output)).collect();
                    walk.windows(2).all(|w| match t {
                        Trend::Increasing => w[1] > w[0],
                        Trend::Decreasing => w[1] < w[0],
                    })
                }
            });
            CellCheck {
                regime,
                input,
                output,
                verdict,
                min_frequency: freqs.iter().cloned().fold(f64::INFINITY, f64::min),
                max_frequency: freqs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                agrees,
                trends_hold,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use SignBit::{Minus as M, Plus as P};

    fn close(a: (f64, f64), b: (f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12
    }

    #[test]
    fn delta_examples() {
        assert!(close(expectation_delta((1.0, 1.0), (0.5, 0.5), (0.1, 0.1)), (0.15, 0.15)));
        assert!(close(expectation_delta((1.0, 1.0), (1.0, 1.0), (0.1, -0.1)), (0.0, 0.0)));
        assert_eq!(expectation_delta((1.0, 1.0), (0.0, 0.0), (0.3, -0.7)), (0.3, -0.7));
    }

    #[test]
    fn regime_boxes_are_open() {
        assert_eq!(Regime::of((0.5, 0.5)), Some(Regime::I));
        assert_eq!(Regime::of((-0.5, -0.2)), Some(Regime::II));
        assert_eq!(Regime::of((0.5, -0.2)), Some(Regime::III));
        assert_eq!(Regime::of((-0.5, 0.2)), Some(Regime::IV));
        assert_eq!(Regime::of((0.0, 0.5)), None);
        assert_eq!(Regime::of((1.0, 0.5)), None);
        assert_eq!(Regime::of((-0.5, -1.0)), None);
    }

    #[test]
    fn crossing_into_opposite_moves_is_infeasible() {
        let v = classify(Regime::I, Quadrant(P, M), Quadrant(M, P));
        assert!(!v.feasible);
        assert!(v.condition.is_empty());
    }

    #[test]
    fn regime_one_same_direction_interval() {
        let v = classify(Regime::I, Quadrant(P, M), Quadrant(P, M));
        assert!(v.feasible);
        assert_eq!(v.trend(Stock::One), Some(Trend::Decreasing));
        assert_eq!(v.trend(Stock::Two), Some(Trend::Decreasing));
        // -b1·dr2 < dr1 < -dr2/b2 with dr2 = -0.5, b = (0.5, 0.5): (0.25, 1).
        let b = (0.5, 0.5);
        let holds = |x: f64| v.condition.iter().all(|c| c.holds(b, (x, -0.5)));
        assert!(holds(0.3) && holds(0.9));
        assert!(!holds(0.2) && !holds(1.1));
    }

    #[test]
    fn regime_two_opposite_inputs_are_forced() {
        for out in Quadrant::ALL {
            let v = classify(Regime::II, Quadrant(P, M), out);
            assert_eq!(v.feasible, out == Quadrant(P, M));
        }
        assert!(classify(Regime::II, Quadrant(P, M), Quadrant(P, M)).is_certain());
    }

    #[test]
    fn regime_three_joint_rise() {
        let v = classify(Regime::III, Quadrant(P, P), Quadrant(P, P));
        assert_eq!(v.condition, vec![Constraint { stock: Stock::Two, exceeds: true }]);
        assert_eq!(v.trend(Stock::Two), Some(Trend::Decreasing));
        assert_eq!(v.trend(Stock::One), None);
    }

    #[test]
    fn each_input_has_a_feasible_output() {
        for r in Regime::ALL {
            for i in Quadrant::ALL {
                let n = Quadrant::ALL.iter().filter(|&&o| classify(r, i, o).feasible).count();
                assert!(n >= 1, "{r} {i}");
                let certain = Quadrant::ALL.iter().filter(|&&o| classify(r, i, o).is_certain()).count();
                assert!(certain == 0 || n == 1, "{r} {i}");
            }
        }
    }

    #[test]
    fn symmetric_under_relabeling() {
        assert!(relabel_symmetric());
    }

    #[test]
    fn sampler_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = brute_force_feasibility(Regime::I, (0.5, 0.5), Quadrant(P, M), 100_000, &mut rng).unwrap();
        assert_eq!(f.count(Quadrant(M, P)), 0);
        assert_eq!(f.counts.iter().sum::<u64>(), 100_000);

        for b in [(0.9, 0.9), (0.1, 0.1)] {
            let f = brute_force_feasibility(Regime::I, b, Quadrant(P, P), 10_000, &mut rng).unwrap();
            assert_eq!(f.frequency(Quadrant(P, P)), 1.0);
        }

        let lo = brute_force_feasibility(Regime::III, (0.5, -0.5), Quadrant(P, P), 100_000, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let hi = brute_force_feasibility(Regime::III, (0.5, -0.9), Quadrant(P, P), 100_000, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert!(hi.frequency(Quadrant(P, P)) < lo.frequency(Quadrant(P, P)));
    }

    #[test]
    fn sampler_rejects_wrong_regime() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(brute_force_feasibility(Regime::I, (-0.5, 0.5), Quadrant(P, P), 10, &mut rng).is_err());
    }

    #[test]
    fn only_unit_own_weight() {
        assert!(classify_with((1.0, 1.0), Regime::I, Quadrant(P, P), Quadrant(P, P)).is_ok());
        assert!(matches!(
            classify_with((0.5, 1.0), Regime::I, Quadrant(P, P), Quadrant(P, P)),
            Err(Error::UnsupportedOwnWeight(..))
        ));
    }

    #[test]
    fn uniform_box_probabilities() {
        // P(|x| > b|y|) = 1 - b/2 for b ≤ 1 on the unit box.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = brute_force_feasibility(Regime::III, (0.5, -0.5), Quadrant(P, P), 200_000, &mut rng).unwrap();
        assert!((f.frequency(Quadrant(P, P)) - 0.75).abs() < 0.005);
    }

    #[test]
    fn correlation_sign_examples() {
        assert_eq!(predict_correlation_sign((0.8, 0.8)), CorrelationSign::Positive);
        assert_eq!(predict_correlation_sign((-0.8, -0.8)), CorrelationSign::Negative);
        assert_eq!(predict_correlation_sign((0.8, -0.8)), CorrelationSign::Weak);
        assert_eq!(predict_correlation_sign((0.05, 0.8)), CorrelationSign::Weak);
        assert_eq!(predict_correlation_sign((0.0, 0.0)), CorrelationSign::Weak);
    }

    #[test]
    fn reduced_verification_passes() {
        let report = verify(20_000, 1);
        assert_eq!(report.cells.len(), 64);
        for c in &report.cells {
            assert!(c.passed(), "{} {} {}: {:?}", c.regime, c.input, c.output, c);
        }
        assert!(report.passed());
    }
}
