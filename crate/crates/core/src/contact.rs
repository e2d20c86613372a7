//! Boundary laws on the contact surface and the truncation maps.
//!
//! * normal compliance `p(u_nu - g) = lambda (u_nu - g)_+^m`, giving `h_nu(u) = p(u . nu - g)`
//! * friction `-sigma_tau = h_tau(u, v, theta) xi`, `xi` a selection of the subdifferential of
//!   `|.|` at `v_tau`, regularized as `v_tau / sqrt(|v_tau|^2 + eps^2)`
//! * Archard wear source `h_w = eta mu p(u_nu - g) |v_tau|`
//! * truncations `N_l` (vectors) and `M_l` (scalars): radial clipping to the ball of radius `l`

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::Vec3;

pub type ScalarField = Arc<dyn Fn(&Vec3) -> f64 + Send + Sync>;
pub type RegionPredicate = Arc<dyn Fn(&Vec3) -> bool + Send + Sync>;

/// `N_l`: identity on `|x| <= l`, `l x / |x|` outside.
pub fn truncate_vector(x: &Vec3, l: f64) -> Vec3 {
    clip_vector(x, l).0
}

/// `M_l`, the scalar version of [`truncate_vector`].
pub fn truncate_scalar(x: f64, l: f64) -> f64 {
    clip_scalar(x, l).0
}

// Rescaled vectors land within a few ulps of the sphere; treating that band as inside keeps
// the maps exactly idempotent.
const SPHERE_BAND: f64 = 4.0 * f64::EPSILON;

/// [`truncate_vector`] that also reports whether clipping happened.
pub fn clip_vector(x: &Vec3, l: f64) -> (Vec3, bool) {
    let n = x.norm();
    if n <= l * (1.0 + SPHERE_BAND) {
        (*x, false)
    } else {
        (x * l / n, true)
    }
}

pub fn clip_scalar(x: f64, l: f64) -> (f64, bool) {
    if x.abs() <= l {
        (x, false)
    } else {
        (l * x.signum(), true)
    }
}

/// Gap between the contact surface and the foundation, measured along the outward normal.
#[derive(Clone)]
pub enum Gap {
    Constant(f64),
    Field(ScalarField),
}

impl Gap {
    pub fn at(&self, x: &Vec3) -> f64 {
        match self {
            Gap::Constant(g) => *g,
            Gap::Field(f) => f(x),
        }
    }
}

impl fmt::Debug for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gap::Constant(g) => write!(f, "Gap::Constant({g})"),
            Gap::Field(_) => f.write_str("Gap::Field(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NormalLaw {
    /// `lambda_nu_c`.
    pub stiffness: f64,
    /// Exponent `m >= 1`.
    pub exponent: f64,
    pub gap: Gap,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FrictionMode {
    /// `h_tau = mu p(u_nu - g)`.
    CoulombCompliance,
    /// `h_tau` is the given constant.
    ConstantBound(f64),
}

#[derive(Clone, Debug)]
pub struct FrictionLaw {
    pub mu: f64,
    pub mode: FrictionMode,
    /// Declared bound on the subdifferential, `|xi| <= c_1tau`.
    pub c1_tau: f64,
    /// Regularization of the kink at `v_tau = 0`.
    pub eps_reg: f64,
    /// Wear dependence of `h_tau`: factor `max(0, 1 + c_theta M_l(theta))`.
    pub c_theta: f64,
}

#[derive(Clone)]
pub struct WearLaw {
    /// Wear rate constant `eta`.
    pub rate: f64,
    /// Diffusivity `kappa`.
    pub kappa: f64,
    /// Facets whose centroid satisfies the predicate generate wear; `None` means all of them.
    pub region: Option<RegionPredicate>,
}

impl fmt::Debug for WearLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WearLaw")
            .field("rate", &self.rate)
            .field("kappa", &self.kappa)
            .field("region", &self.region.as_ref().map(|_| ".."))
            .finish()
    }
}

impl WearLaw {
    pub fn generates_at(&self, x: &Vec3) -> bool {
        self.region.as_ref().is_none_or(|r| r(x))
    }
}

/// Declared growth constants. `None` means "derive from the law parameters", which is exact for
/// linear compliance (`m = 1`).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GrowthConstants {
    pub c_nu: Option<f64>,
    pub c_tau: Option<f64>,
    pub c_w: Option<f64>,
}

/// Growth constants actually used by [`ContactModel::validate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveGrowth {
    pub c_nu: f64,
    pub c_tau: f64,
    pub c_w: f64,
}

/// Position and outward normal of a point on the contact surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactPoint {
    pub x: Vec3,
    pub normal: Vec3,
}

impl ContactPoint {
    pub fn new(x: Vec3, normal: Vec3) -> Self {
        ContactPoint { x, normal }
    }

    pub fn normal_part(&self, u: &Vec3) -> f64 {
        u.dot(&self.normal)
    }

    pub fn tangential_part(&self, v: &Vec3) -> Vec3 {
        v - self.normal * v.dot(&self.normal)
    }
}

#[derive(Clone, Debug)]
pub struct ContactModel {
    pub normal: NormalLaw,
    pub friction: FrictionLaw,
    pub wear: WearLaw,
    pub truncation_l: f64,
    pub growth: GrowthConstants,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("{name} must be positive, got {v}")))
    }
}

fn nonnegative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("{name} must be nonnegative, got {v}")))
    }
}

impl ContactModel {
    /// Checks the sign conditions on the parameters.
    pub fn new(normal: NormalLaw, friction: FrictionLaw, wear: WearLaw, truncation_l: f64) -> Result<Self> {
        positive("normal compliance stiffness lambda", normal.stiffness)?;
        if !(normal.exponent >= 1.0) || !normal.exponent.is_finite() {
            return Err(Error::Hypothesis(format!(
                "normal compliance exponent m must be >= 1, got {}",
                normal.exponent
            )));
        }
        if let Gap::Constant(g) = normal.gap {
            if !g.is_finite() {
                return Err(Error::NonFinite("gap".into()));
            }
        }
        nonnegative("friction coefficient mu", friction.mu)?;
        if let FrictionMode::ConstantBound(b) = friction.mode {
            nonnegative("constant friction bound", b)?;
        }
        positive("subdifferential bound c_1tau", friction.c1_tau)?;
        positive("friction regularization eps_reg", friction.eps_reg)?;
        if !friction.c_theta.is_finite() {
            return Err(Error::NonFinite("c_theta".into()));
        }
        nonnegative("wear rate eta", wear.rate)?;
        positive("wear diffusivity kappa", wear.kappa)?;
        positive("truncation level l", truncation_l)?;
        Ok(ContactModel {
            normal,
            friction,
            wear,
            truncation_l,
            growth: GrowthConstants::default(),
        })
    }

    pub fn with_growth(mut self, growth: GrowthConstants) -> Self {
        self.growth = growth;
        self
    }

    pub fn with_truncation(mut self, l: f64) -> Result<Self> {
        positive("truncation level l", l)?;
        self.truncation_l = l;
        Ok(self)
    }

    /// Checks the growth, sign and boundedness conditions of the laws by seeded random
    /// sampling of `|u|, |v|, |theta| <= 10 l` at the given surface positions.
    pub fn validate(&self, sample_points: &[Vec3], seed: u64) -> Result<EffectiveGrowth> {
        let mut gmax = 0.0_f64;
        for x in sample_points {
            let g = self.normal.gap.at(x);
            if !g.is_finite() {
                return Err(Error::NonFinite(format!("gap at ({}, {}, {})", x.x, x.y, x.z)));
            }
            gmax = gmax.max(g.abs());
        }
        let l = self.truncation_l;
        let c_nu = self.growth.c_nu.unwrap_or(self.normal.stiffness * gmax.max(1.0));
        let theta_factor = 1.0 + self.friction.c_theta.abs() * l;
        let c_tau = self.growth.c_tau.unwrap_or(match self.friction.mode {
            FrictionMode::CoulombCompliance => self.friction.mu * c_nu * theta_factor,
            FrictionMode::ConstantBound(b) => b * theta_factor,
        });
        let c_w = self.growth.c_w.unwrap_or(self.wear.rate * self.friction.mu * c_nu);
        let growth = EffectiveGrowth {
            c_nu: c_nu.max(f64::MIN_POSITIVE),
            c_tau: c_tau.max(f64::MIN_POSITIVE),
            c_w: c_w.max(f64::MIN_POSITIVE),
        };

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_vec = |rng: &mut ChaCha8Rng, radius: f64| {
            let dir = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let dir = if dir.norm() > 1e-12 { dir.normalize() } else { Vec3::x() };
            dir * rng.gen_range(0.0..=radius)
        };
        let points: Vec<Vec3> = if sample_points.is_empty() {
            vec![Vec3::zeros()]
        } else {
            sample_points.to_vec()
        };
        let slack = 1.0 + 1e-12;
        for k in 0..2000 {
            // A few samples at small scale so the constant terms are exercised too.
            let radius = if k % 4 == 0 { 1.0 } else { 10.0 * l };
            let x = points[k % points.len()];
            let normal = random_vec(&mut rng, 1.0).try_normalize(1e-12).unwrap_or(Vec3::z());
            let pt = ContactPoint::new(x, normal);
            let u = random_vec(&mut rng, radius);
            let v = random_vec(&mut rng, radius);
            let theta = rng.gen_range(-radius..=radius);

            let h_nu = normal_compliance(pt.normal_part(&u), &x, self);
            if h_nu.abs() > growth.c_nu * (1.0 + u.norm()) * slack {
                return Err(Error::Hypothesis(format!(
                    "normal compliance exceeds linear growth |h_nu(u)| <= C_nu (1 + |u|) with C_nu = {}",
                    growth.c_nu
                )));
            }
            let h_tau = friction_modulus(&u, &v, theta, &pt, self);
            if !(h_tau >= 0.0) || h_tau > growth.c_tau * (1.0 + u.norm() + v.norm() + theta.abs()) * slack {
                return Err(Error::Hypothesis(format!(
                    "friction modulus must satisfy 0 <= h_tau <= C_tau (1 + |u| + |v| + |theta|) with C_tau = {}",
                    growth.c_tau
                )));
            }
            let h_w = wear_source(&u, &v, &pt, self);
            if h_w.abs() > growth.c_w * (1.0 + u.norm_squared() + v.norm_squared()) * slack {
                return Err(Error::Hypothesis(format!(
                    "wear source exceeds quadratic growth |h_w| <= C_w (1 + |u|^2 + |v|^2) with C_w = {}",
                    growth.c_w
                )));
            }
            let vt = pt.tangential_part(&v);
            let xi = friction_selection(&vt, self);
            if xi.norm() > self.friction.c1_tau * slack {
                return Err(Error::Hypothesis(format!(
                    "friction selection exceeds the declared bound c_1tau = {}",
                    self.friction.c1_tau
                )));
            }
            if xi.dot(&vt) < 0.0 {
                return Err(Error::Hypothesis(
                    "friction selection must satisfy xi . v_tau >= 0".into(),
                ));
            }
        }
        Ok(growth)
    }
}

/// Normal compliance pressure `lambda (u_nu - g(x))_+^m`.
pub fn normal_compliance(u_nu: f64, x: &Vec3, cm: &ContactModel) -> f64 {
    let pen = u_nu - cm.normal.gap.at(x);
    if pen <= 0.0 {
        0.0
    } else if cm.normal.exponent == 1.0 {
        cm.normal.stiffness * pen
    } else {
        cm.normal.stiffness * pen.powf(cm.normal.exponent)
    }
}

/// Regularized selection `v_tau / sqrt(|v_tau|^2 + eps^2)` of the subdifferential of `|.|`.
/// Returns zero at `v_tau = 0`.
pub fn friction_selection(v_tau: &Vec3, cm: &ContactModel) -> Vec3 {
    regularized_selection(v_tau, cm.friction.eps_reg)
}

pub fn regularized_selection(v_tau: &Vec3, eps: f64) -> Vec3 {
    let n2 = v_tau.norm_squared();
    if n2 == 0.0 {
        return Vec3::zeros();
    }
    v_tau / (n2 + eps * eps).sqrt()
}

/// Friction modulus `h_tau(u, v, theta) >= 0`.
pub fn friction_modulus(u: &Vec3, _v: &Vec3, theta: f64, pt: &ContactPoint, cm: &ContactModel) -> f64 {
    let base = match cm.friction.mode {
        FrictionMode::CoulombCompliance => {
            if cm.friction.mu == 0.0 {
                return 0.0;
            }
            cm.friction.mu * normal_compliance(pt.normal_part(u), &pt.x, cm)
        }
        FrictionMode::ConstantBound(b) => b,
    };
    let factor = 1.0 + cm.friction.c_theta * truncate_scalar(theta, cm.truncation_l);
    base * factor.max(0.0)
}

/// Archard wear source `eta mu p(u_nu - g) |v_tau|`.
pub fn wear_source(u: &Vec3, v: &Vec3, pt: &ContactPoint, cm: &ContactModel) -> f64 {
    if cm.wear.rate == 0.0 || cm.friction.mu == 0.0 {
        return 0.0;
    }
    let p = normal_compliance(pt.normal_part(u), &pt.x, cm);
    cm.wear.rate * cm.friction.mu * p * pt.tangential_part(v).norm()
}
