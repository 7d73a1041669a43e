//! Deterministic core of the cascade model: parameters, the piecewise-constant
//! mean-field drift, regime classification and the analytic predictions that
//! follow from the sign structure of the drift.
//!
//! Every ratio comparison is carried out by cross-multiplication so that a
//! vanishing coupling (`beta = 0` or `alpha = 0`) classifies without dividing
//! by zero.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for [`classify_regime`], relative to the magnitude of the
/// compared products.
pub const DEFAULT_REGIME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    FullyConnected,
    StochasticBlock,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::FullyConnected => f.write_str("fully_connected"),
            Topology::StochasticBlock => f.write_str("stochastic_block"),
        }
    }
}

/// Model parameters. Fields are validated on construction and immutable
/// afterwards; use the `with_*` methods to derive modified copies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    alpha: f64,
    beta: f64,
    delta: f64,
    red_fraction: f64,
    homophily: f64,
    topology: Topology,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    alpha: f64,
    beta: f64,
    #[serde(default)]
    delta: f64,
    red_fraction: f64,
    #[serde(default = "half")]
    homophily: f64,
    #[serde(default = "default_topology")]
    topology: Topology,
}

fn half() -> f64 {
    0.5
}

fn default_topology() -> Topology {
    Topology::FullyConnected
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(
            raw.alpha,
            raw.beta,
            raw.delta,
            raw.red_fraction,
            raw.homophily,
            raw.topology,
        )
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        RawParams {
            alpha: p.alpha,
            beta: p.beta,
            delta: p.delta,
            red_fraction: p.red_fraction,
            homophily: p.homophily,
            topology: p.topology,
        }
    }
}

fn check_closed(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            range: "[0, 1]",
        })
    }
}

fn check_open(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            range: "(0, 1)",
        })
    }
}

impl ModelParams {
    pub fn new(
        alpha: f64,
        beta: f64,
        delta: f64,
        red_fraction: f64,
        homophily: f64,
        topology: Topology,
    ) -> Result<Self> {
        check_closed("alpha", alpha)?;
        check_closed("beta", beta)?;
        check_closed("delta", delta)?;
        check_open("red_fraction", red_fraction)?;
        check_open("homophily", homophily)?;
        Ok(ModelParams {
            alpha,
            beta,
            delta,
            red_fraction,
            homophily,
            topology,
        })
    }

    /// Fully connected network, no inertia.
    pub fn fully_connected(alpha: f64, beta: f64, red_fraction: f64) -> Result<Self> {
        Self::new(alpha, beta, 0.0, red_fraction, 0.5, Topology::FullyConnected)
    }

    /// Two-block stochastic block model with homophily `rho`, no inertia.
    pub fn stochastic_block(alpha: f64, beta: f64, red_fraction: f64, rho: f64) -> Result<Self> {
        Self::new(alpha, beta, 0.0, red_fraction, rho, Topology::StochasticBlock)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn red_fraction(&self) -> f64 {
        self.red_fraction
    }

    pub fn homophily(&self) -> f64 {
        self.homophily
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.beta, self.delta, self.red_fraction, self.homophily, self.topology)
    }

    pub fn with_beta(self, beta: f64) -> Result<Self> {
        Self::new(self.alpha, beta, self.delta, self.red_fraction, self.homophily, self.topology)
    }

    pub fn with_delta(self, delta: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, delta, self.red_fraction, self.homophily, self.topology)
    }

    pub fn with_red_fraction(self, red_fraction: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.delta, red_fraction, self.homophily, self.topology)
    }

    pub fn with_homophily(self, homophily: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.delta, self.red_fraction, homophily, self.topology)
    }

    pub fn with_topology(self, topology: Topology) -> Self {
        ModelParams { topology, ..self }
    }

    fn require_no_inertia(&self) -> Result<()> {
        if self.delta == 0.0 {
            Ok(())
        } else {
            Err(Error::NonZeroInertia(self.delta))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCouplings {
    pub alpha_eff: f64,
    pub beta_eff: f64,
}

/// Couplings that enter the mean-field drift. Homophily scales in-group love
/// by `rho` and out-group hate by `1 - rho` on a stochastic block model.
pub fn effective_couplings(params: &ModelParams) -> EffectiveCouplings {
    match params.topology {
        Topology::FullyConnected => EffectiveCouplings {
            alpha_eff: params.alpha,
            beta_eff: params.beta,
        },
        Topology::StochasticBlock => EffectiveCouplings {
            alpha_eff: params.alpha * params.homophily,
            beta_eff: params.beta * (1.0 - params.homophily),
        },
    }
}

/// Fractions `(theta_b, theta_r)` of the blue and red groups holding choice 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationState {
    pub theta_b: f64,
    pub theta_r: f64,
}

impl PopulationState {
    /// Builds a state, clamping both components into `[0, 1]`.
    pub fn new(theta_b: f64, theta_r: f64) -> Self {
        PopulationState {
            theta_b: theta_b.clamp(0.0, 1.0),
            theta_r: theta_r.clamp(0.0, 1.0),
        }
    }

    pub fn symmetric(theta: f64) -> Self {
        Self::new(theta, theta)
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.theta_b, self.theta_r]
    }

    pub fn distance(&self, other: &PopulationState) -> f64 {
        (self.theta_b - other.theta_b).hypot(self.theta_r - other.theta_r)
    }

    /// Largest componentwise deviation.
    pub fn sup_norm_distance(&self, other: &PopulationState) -> f64 {
        (self.theta_b - other.theta_b)
            .abs()
            .max((self.theta_r - other.theta_r).abs())
    }
}

/// Long-run outcome classes for a party-independent start without inertia.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    Case1Consensus,
    Case2RedMajorityPolarization,
    Case3BlueMajorityPolarization,
    Case4NonPartisan,
    Boundary,
}

impl Regime {
    /// Short label used in CSV and JSON output.
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Case1Consensus => "Case1",
            Regime::Case2RedMajorityPolarization => "Case2",
            Regime::Case3BlueMajorityPolarization => "Case3",
            Regime::Case4NonPartisan => "Case4",
            Regime::Boundary => "Boundary",
        }
    }

    pub fn from_label(label: &str) -> Option<Regime> {
        Some(match label {
            "Case1" => Regime::Case1Consensus,
            "Case2" => Regime::Case2RedMajorityPolarization,
            "Case3" => Regime::Case3BlueMajorityPolarization,
            "Case4" => Regime::Case4NonPartisan,
            "Boundary" => Regime::Boundary,
            _ => return None,
        })
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Arguments of the adoption indicators for the blue and red group. A group
/// moves towards choice 1 when its argument exceeds `delta` and towards
/// choice 0 when it is below `-delta`.
pub fn indicator_arguments(state: &PopulationState, params: &ModelParams) -> [f64; 2] {
    let EffectiveCouplings { alpha_eff, beta_eff } = effective_couplings(params);
    let r = params.red_fraction;
    let xb = 2.0 * state.theta_b - 1.0;
    let xr = 2.0 * state.theta_r - 1.0;
    [
        alpha_eff * (1.0 - r) * xb - beta_eff * r * xr,
        alpha_eff * r * xr - beta_eff * (1.0 - r) * xb,
    ]
}

/// Which way a group's indicator points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pull {
    TowardZero,
    Hold,
    TowardOne,
}

/// Classifies an indicator argument against the band `[-delta - slack, delta + slack]`.
/// Values inside the closed band hold.
pub fn pull(argument: f64, delta: f64, slack: f64) -> Pull {
    if argument > delta + slack {
        Pull::TowardOne
    } else if argument < -delta - slack {
        Pull::TowardZero
    } else {
        Pull::Hold
    }
}

fn component_rate(theta: f64, pull: Pull) -> f64 {
    match pull {
        Pull::TowardOne => 1.0 - theta,
        Pull::TowardZero => -theta,
        Pull::Hold => 0.0,
    }
}

/// Mean-field drift `[d theta_b / dt, d theta_r / dt]`.
pub fn drift(state: &PopulationState, params: &ModelParams) -> [f64; 2] {
    drift_with_slack(state, params, 0.0)
}

/// Drift with the hold band widened by `slack` on both sides. The integrator
/// uses a tiny slack so that a state placed on a discontinuity locus by
/// event location is recognised as sitting on it despite rounding.
pub fn drift_with_slack(state: &PopulationState, params: &ModelParams, slack: f64) -> [f64; 2] {
    let [arg_b, arg_r] = indicator_arguments(state, params);
    [
        component_rate(state.theta_b, pull(arg_b, params.delta, slack)),
        component_rate(state.theta_r, pull(arg_r, params.delta, slack)),
    ]
}

/// Signed margins of the two regime inequalities, after cross-multiplication.
/// `hate_margin > 0` iff `r/(1-r) > alpha/beta`; `love_margin > 0` iff
/// `r/(1-r) > beta/alpha`. The second element is the scale each margin is
/// compared against.
fn regime_margins(params: &ModelParams) -> ([f64; 2], [f64; 2]) {
    let EffectiveCouplings { alpha_eff, beta_eff } = effective_couplings(params);
    let r = params.red_fraction;
    let hate = (r * beta_eff - (1.0 - r) * alpha_eff, r * beta_eff + (1.0 - r) * alpha_eff);
    let love = (r * alpha_eff - (1.0 - r) * beta_eff, r * alpha_eff + (1.0 - r) * beta_eff);
    ([hate.0, love.0], [hate.1, love.1])
}

/// Regime for a party-independent start without inertia.
///
/// A comparison whose margin is within `tol` (relative to the magnitude of the
/// compared products) is reported as [`Regime::Boundary`]. The relative form
/// keeps the classification invariant under a common rescaling of the
/// couplings.
pub fn classify_regime(params: &ModelParams, tol: f64) -> Result<Regime> {
    params.require_no_inertia()?;
    let ([hate, love], [hate_scale, love_scale]) = regime_margins(params);
    if hate.abs() <= tol * hate_scale || love.abs() <= tol * love_scale {
        return Ok(Regime::Boundary);
    }
    Ok(match (hate > 0.0, love > 0.0) {
        (false, true) => Regime::Case1Consensus,
        (true, true) => Regime::Case2RedMajorityPolarization,
        (false, false) => Regime::Case3BlueMajorityPolarization,
        (true, false) => Regime::Case4NonPartisan,
    })
}

/// Limit of the mean-field dynamics from the symmetric start `(theta0, theta0)`.
pub fn predict_limit_symmetric(theta0: f64, params: &ModelParams) -> Result<PopulationState> {
    params.require_no_inertia()?;
    if theta0 == 0.5 {
        return Err(Error::AmbiguousInitialState);
    }
    let up = theta0 > 0.5;
    let popular = if up { 1.0 } else { 0.0 };
    let other = 1.0 - popular;
    let limit = match classify_regime(params, DEFAULT_REGIME_TOL)? {
        Regime::Case1Consensus => PopulationState::new(popular, popular),
        Regime::Case2RedMajorityPolarization => PopulationState::new(other, popular),
        Regime::Case3BlueMajorityPolarization => PopulationState::new(popular, other),
        Regime::Case4NonPartisan => PopulationState::new(0.5, 0.5),
        Regime::Boundary => return Err(Error::BoundaryRegime),
    };
    Ok(limit)
}

/// Whether the mean-field dynamics reach a consensus corner from a
/// group-dependent start.
pub fn consensus_reachable(theta0: &PopulationState, params: &ModelParams) -> Result<bool> {
    params.require_no_inertia()?;
    if theta0.theta_b == 0.5 {
        return Err(Error::DegenerateInitialState("blue"));
    }
    if theta0.theta_r == 0.5 {
        return Err(Error::DegenerateInitialState("red"));
    }
    match classify_regime(params, DEFAULT_REGIME_TOL)? {
        Regime::Boundary => return Err(Error::BoundaryRegime),
        Regime::Case1Consensus => {}
        _ => return Ok(false),
    }
    let EffectiveCouplings { alpha_eff, beta_eff } = effective_couplings(params);
    let r = params.red_fraction;
    let xb = 2.0 * theta0.theta_b - 1.0;
    let xr = 2.0 * theta0.theta_r - 1.0;
    // Both bounds on xb/xr multiplied through by xr^2 > 0 (and by the
    // positive coupling products), so the sign of xr needs no case split.
    let cross = xb * xr;
    let sq = xr * xr;
    let above_lower = beta_eff * r * sq < alpha_eff * (1.0 - r) * cross;
    let below_upper = beta_eff * (1.0 - r) * cross < alpha_eff * r * sq;
    Ok(above_lower && below_upper)
}

/// The affine locus `a * theta_b + b * theta_r + c = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineLocus {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl AffineLocus {
    pub fn eval(&self, state: &PopulationState) -> f64 {
        self.a * state.theta_b + self.b * state.theta_r + self.c
    }

    /// `d theta_r / d theta_b` along the locus; `None` for a vertical or
    /// degenerate locus.
    pub fn slope(&self) -> Option<f64> {
        if self.b == 0.0 {
            None
        } else {
            Some(-self.a / self.b)
        }
    }

    /// `theta_r` on the locus at the given `theta_b`.
    pub fn theta_r_at(&self, theta_b: f64) -> Option<f64> {
        if self.b == 0.0 {
            None
        } else {
            Some(-(self.a * theta_b + self.c) / self.b)
        }
    }

    pub fn contains(&self, state: &PopulationState, tol: f64) -> bool {
        self.eval(state).abs() <= tol
    }
}

/// Loci where each group's indicator argument equals `+delta` (index 0) and
/// `-delta` (index 1). Crossing one reverses or stalls that group's trend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TippingLines {
    pub blue_flip: [AffineLocus; 2],
    pub red_flip: [AffineLocus; 2],
}

pub fn tipping_boundaries(params: &ModelParams) -> TippingLines {
    let EffectiveCouplings { alpha_eff, beta_eff } = effective_couplings(params);
    let r = params.red_fraction;
    let d = params.delta;
    // blue: 2a(1-r) tb - 2b r tr - a(1-r) + b r = +-delta
    let (ba, bb, bc) = (
        2.0 * alpha_eff * (1.0 - r),
        -2.0 * beta_eff * r,
        -alpha_eff * (1.0 - r) + beta_eff * r,
    );
    // red: 2a r tr - 2b(1-r) tb - a r + b(1-r) = +-delta
    let (ra, rb, rc) = (
        -2.0 * beta_eff * (1.0 - r),
        2.0 * alpha_eff * r,
        -alpha_eff * r + beta_eff * (1.0 - r),
    );
    TippingLines {
        blue_flip: [
            AffineLocus { a: ba, b: bb, c: bc - d },
            AffineLocus { a: ba, b: bb, c: bc + d },
        ],
        red_flip: [
            AffineLocus { a: ra, b: rb, c: rc - d },
            AffineLocus { a: ra, b: rb, c: rc + d },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fc(alpha: f64, beta: f64, r: f64) -> ModelParams {
        ModelParams::fully_connected(alpha, beta, r).unwrap()
    }

    fn sbm(alpha: f64, beta: f64, r: f64, rho: f64) -> ModelParams {
        ModelParams::stochastic_block(alpha, beta, r, rho).unwrap()
    }

    // Straight transcription of the indicator form, kept apart from the
    // implementation's argument/pull split.
    fn drift_oracle(tb: f64, tr: f64, a: f64, b: f64, r: f64, d: f64) -> [f64; 2] {
        let ab = a * (1.0 - r) * (2.0 * tb - 1.0) - b * r * (2.0 * tr - 1.0);
        let ar = a * r * (2.0 * tr - 1.0) - b * (1.0 - r) * (2.0 * tb - 1.0);
        let ind = |c: bool| if c { 1.0 } else { 0.0 };
        [
            (1.0 - tb) * ind(ab > d) - tb * ind(ab < -d),
            (1.0 - tr) * ind(ar > d) - tr * ind(ar < -d),
        ]
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(matches!(
            ModelParams::fully_connected(1.5, 0.5, 0.5),
            Err(Error::InvalidParameter { name: "alpha", .. })
        ));
        assert!(ModelParams::fully_connected(0.5, -0.1, 0.5).is_err());
        assert!(ModelParams::fully_connected(0.5, 0.5, 0.0).is_err());
        assert!(ModelParams::fully_connected(0.5, 0.5, 1.0).is_err());
        assert!(ModelParams::stochastic_block(0.5, 0.5, 0.5, 1.0).is_err());
        assert!(ModelParams::fully_connected(0.5, 0.5, 0.5).unwrap().with_delta(1.01).is_err());
    }

    #[test]
    fn params_serde_validates() {
        let ok: ModelParams =
            serde_json::from_str(r#"{"alpha":0.8,"beta":0.7,"red_fraction":0.65}"#).unwrap();
        assert_eq!(ok, fc(0.8, 0.7, 0.65));
        let bad = serde_json::from_str::<ModelParams>(r#"{"alpha":1.5,"beta":0.7,"red_fraction":0.5}"#);
        assert!(bad.unwrap_err().to_string().contains("alpha"));
    }

    #[test]
    fn couplings() {
        let c = effective_couplings(&fc(0.8, 0.7, 0.5));
        assert_eq!((c.alpha_eff, c.beta_eff), (0.8, 0.7));

        let c = effective_couplings(&sbm(0.8, 0.7, 0.5, 0.7));
        assert!((c.alpha_eff - 0.56).abs() < 1e-15);
        assert!((c.beta_eff - 0.21).abs() < 1e-15);

        let c = effective_couplings(&sbm(0.8, 0.7, 0.5, 0.5));
        assert_eq!((c.alpha_eff, c.beta_eff), (0.4, 0.35));
    }

    #[test]
    fn drift_examples() {
        let p = fc(0.8, 0.7, 0.5);
        assert_eq!(drift(&PopulationState::new(0.5, 0.5), &p), [0.0, 0.0]);

        let d = drift(&PopulationState::new(0.7, 0.7), &p);
        let o = drift_oracle(0.7, 0.7, 0.8, 0.7, 0.5, 0.0);
        assert_eq!(d, o);
        assert!((d[0] - 0.3).abs() < 1e-12 && (d[1] - 0.3).abs() < 1e-12);

        assert_eq!(drift(&PopulationState::new(1.0, 1.0), &p), [0.0, 0.0]);

        let p = p.with_delta(0.1).unwrap();
        let args = indicator_arguments(&PopulationState::new(0.52, 0.5), &p);
        assert!((args[0] - 0.016).abs() < 1e-12);
        assert!((args[1] + 0.014).abs() < 1e-12);
        assert_eq!(drift(&PopulationState::new(0.52, 0.5), &p), [0.0, 0.0]);
    }

    #[test]
    fn band_edge_holds() {
        // alpha (1 - r)(2 tb - 1) = 0.5 * 0.5 * 0.4 = 0.1 = delta exactly.
        let p = ModelParams::new(0.5, 0.0, 0.1, 0.5, 0.5, Topology::FullyConnected).unwrap();
        let s = PopulationState::new(0.7, 0.5);
        let args = indicator_arguments(&s, &p);
        assert_eq!(pull(0.1, 0.1, 0.0), Pull::Hold);
        assert_eq!(pull(-0.1, 0.1, 0.0), Pull::Hold);
        assert!((args[0] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn drift_matches_oracle_on_grid() {
        for &(a, b, r, d) in &[(0.8, 0.7, 0.65, 0.0), (0.2, 0.8, 0.5, 0.0), (0.6, 0.3, 0.3, 0.05)] {
            let p = ModelParams::new(a, b, d, r, 0.5, Topology::FullyConnected).unwrap();
            for i in 0..=20 {
                for j in 0..=20 {
                    let (tb, tr) = (i as f64 / 20.0, j as f64 / 20.0);
                    assert_eq!(
                        drift(&PopulationState::new(tb, tr), &p),
                        drift_oracle(tb, tr, a, b, r, d)
                    );
                }
            }
        }
    }

    #[test]
    fn classification_examples() {
        let tol = DEFAULT_REGIME_TOL;
        assert_eq!(classify_regime(&sbm(0.8, 0.7, 0.65, 0.7), tol).unwrap(), Regime::Case1Consensus);
        assert_eq!(
            classify_regime(&sbm(0.8, 0.7, 0.65, 0.5), tol).unwrap(),
            Regime::Case2RedMajorityPolarization
        );
        assert_eq!(classify_regime(&sbm(0.8, 0.7, 0.65, 0.3), tol).unwrap(), Regime::Case4NonPartisan);
        for r in [0.05, 0.35, 0.5, 0.9] {
            assert_eq!(classify_regime(&fc(0.3, 0.0, r), tol).unwrap(), Regime::Case1Consensus);
            assert_eq!(classify_regime(&fc(0.0, 0.3, r), tol).unwrap(), Regime::Case4NonPartisan);
        }
        assert_eq!(classify_regime(&fc(0.8, 0.7, 0.3), tol).unwrap(), Regime::Case3BlueMajorityPolarization);
        // r/(1-r) = 1 = alpha/beta
        assert_eq!(classify_regime(&fc(0.5, 0.5, 0.5), tol).unwrap(), Regime::Boundary);
        assert_eq!(classify_regime(&fc(0.0, 0.0, 0.5), tol).unwrap(), Regime::Boundary);
    }

    #[test]
    fn classifier_rejects_inertia() {
        let p = fc(0.8, 0.7, 0.5).with_delta(0.1).unwrap();
        assert!(matches!(classify_regime(&p, 0.0), Err(Error::NonZeroInertia(_))));
        assert!(predict_limit_symmetric(0.7, &p).is_err());
        assert!(consensus_reachable(&PopulationState::new(0.7, 0.6), &p).is_err());
    }

    #[test]
    fn symmetric_predictions() {
        assert_eq!(
            predict_limit_symmetric(0.7, &fc(0.8, 0.7, 0.5)).unwrap(),
            PopulationState::new(1.0, 1.0)
        );
        assert_eq!(
            predict_limit_symmetric(0.3, &fc(0.8, 0.7, 0.5)).unwrap(),
            PopulationState::new(0.0, 0.0)
        );
        assert_eq!(
            predict_limit_symmetric(0.7, &fc(0.8, 0.7, 0.65)).unwrap(),
            PopulationState::new(0.0, 1.0)
        );
        assert_eq!(
            predict_limit_symmetric(0.3, &fc(0.8, 0.7, 0.65)).unwrap(),
            PopulationState::new(1.0, 0.0)
        );
        assert_eq!(
            predict_limit_symmetric(0.7, &fc(0.8, 0.7, 0.3)).unwrap(),
            PopulationState::new(1.0, 0.0)
        );
        assert_eq!(
            predict_limit_symmetric(0.7, &fc(0.2, 0.8, 0.5)).unwrap(),
            PopulationState::new(0.5, 0.5)
        );
        assert!(matches!(
            predict_limit_symmetric(0.5, &fc(0.8, 0.7, 0.5)),
            Err(Error::AmbiguousInitialState)
        ));
        assert!(matches!(
            predict_limit_symmetric(0.7, &fc(0.5, 0.5, 0.5)),
            Err(Error::BoundaryRegime)
        ));
    }

    #[test]
    fn case2_prediction_follows_drift_signs() {
        // On the diagonal the arguments are (2 theta - 1) times these factors.
        let (a, b, r) = (0.8, 0.7, 0.65);
        assert!(a * (1.0 - r) - b * r < 0.0);
        assert!(a * r - b * (1.0 - r) > 0.0);
        let d = drift(&PopulationState::symmetric(0.7), &fc(a, b, r));
        assert!(d[0] < 0.0 && d[1] > 0.0);
    }

    #[test]
    fn consensus_examples() {
        let p = fc(0.8, 0.7, 0.5);
        assert!(consensus_reachable(&PopulationState::new(0.61, 0.6), &p).unwrap());
        assert!(!consensus_reachable(&PopulationState::new(0.7, 0.6), &p).unwrap());
        // Below one half on both sides the ratio is the same; consensus at (0, 0).
        assert!(consensus_reachable(&PopulationState::new(0.39, 0.4), &p).unwrap());
        // Opposite sides of one half never reach consensus.
        assert!(!consensus_reachable(&PopulationState::new(0.6, 0.4), &p).unwrap());

        let p = fc(0.8, 0.7, 0.65);
        for s in [(0.61, 0.6), (0.9, 0.9), (0.2, 0.3)] {
            assert!(!consensus_reachable(&PopulationState::new(s.0, s.1), &p).unwrap());
        }
        assert!(matches!(
            consensus_reachable(&PopulationState::new(0.5, 0.6), &fc(0.8, 0.7, 0.5)),
            Err(Error::DegenerateInitialState("blue"))
        ));
        assert!(matches!(
            consensus_reachable(&PopulationState::new(0.6, 0.5), &fc(0.8, 0.7, 0.5)),
            Err(Error::DegenerateInitialState("red"))
        ));
    }

    #[test]
    fn consensus_matches_ratio_form() {
        // Ratio evaluation with explicit division, valid when all factors are nonzero.
        let (a, b, r) = (0.8, 0.7, 0.5);
        let p = fc(a, b, r);
        for i in 1..40 {
            for j in 1..40 {
                let (tb, tr) = (i as f64 / 40.0 + 0.003, j as f64 / 40.0 + 0.001);
                let ratio = (2.0 * tb - 1.0) / (2.0 * tr - 1.0);
                let lo = b * r / (a * (1.0 - r));
                let hi = a * r / (b * (1.0 - r));
                let expect = lo < ratio && ratio < hi;
                assert_eq!(consensus_reachable(&PopulationState::new(tb, tr), &p).unwrap(), expect);
            }
        }
    }

    #[test]
    fn tipping_examples() {
        let lines = tipping_boundaries(&fc(0.6, 0.6, 0.5));
        for locus in lines.blue_flip.iter().chain(lines.red_flip.iter()) {
            for tb in [0.0, 0.3, 0.5, 0.9] {
                assert!((locus.theta_r_at(tb).unwrap() - tb).abs() < 1e-12);
            }
        }
        for p in [fc(0.8, 0.7, 0.65), sbm(0.3, 0.9, 0.2, 0.4), fc(1.0, 0.1, 0.9)] {
            let lines = tipping_boundaries(&p);
            let centre = PopulationState::new(0.5, 0.5);
            for locus in lines.blue_flip.iter().chain(lines.red_flip.iter()) {
                assert!(locus.contains(&centre, 1e-15));
            }
        }
        let slope = tipping_boundaries(&fc(0.8, 0.7, 0.65)).blue_flip[0].slope().unwrap();
        assert!((slope - 0.8 * 0.35 / (0.7 * 0.65)).abs() < 1e-12);
        assert!((slope - 0.6154).abs() < 1e-4);
    }

    #[test]
    fn tipping_loci_track_indicator_arguments() {
        let p = ModelParams::new(0.7, 0.4, 0.05, 0.4, 0.6, Topology::StochasticBlock).unwrap();
        let lines = tipping_boundaries(&p);
        for i in 0..=10 {
            for j in 0..=10 {
                let s = PopulationState::new(i as f64 / 10.0, j as f64 / 10.0);
                let [ab, ar] = indicator_arguments(&s, &p);
                assert!((lines.blue_flip[0].eval(&s) - (ab - 0.05)).abs() < 1e-12);
                assert!((lines.blue_flip[1].eval(&s) - (ab + 0.05)).abs() < 1e-12);
                assert!((lines.red_flip[0].eval(&s) - (ar - 0.05)).abs() < 1e-12);
                assert!((lines.red_flip[1].eval(&s) - (ar + 0.05)).abs() < 1e-12);
            }
        }
    }
}
