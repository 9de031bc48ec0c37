//! Periodic 2D reference solver for `u_t + c (cos a u_x + sin a u_y) = 0`.
//!
//! Fields are stored row-major, `u[j * n + i]` at `(x, y) = (i h, j h)`.

mod config;
mod measure;
mod operator;

pub use config::{parse_config, resolve_operator, write_raw_field, SimulationSetup};
pub use measure::{
    fit_anisotropy_order, growth_rate, measure_anisotropy, mode_phase, snap_mode, AnisotropyRow, SnappedMode,
    GROWTH_WINDOW,
};
pub use operator::{apply_prefactored_periodic, apply_scheme_periodic, kernel_1d, OperatorSpec, Sweep, Taps};

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marcher {
    LeapFrog,
    Rk4,
    /// Forward-sweep predictor, backward-sweep corrector.
    MacCormack,
}

impl Marcher {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "leapfrog" | "leap-frog" | "lf" => Ok(Marcher::LeapFrog),
            "rk4" => Ok(Marcher::Rk4),
            "maccormack" | "mc" => Ok(Marcher::MacCormack),
            other => Err(Error::invalid(format!("unknown marcher `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Marcher::LeapFrog => "leapfrog",
            Marcher::Rk4 => "rk4",
            Marcher::MacCormack => "maccormack",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub operator: OperatorSpec,
    pub marcher: Marcher,
    pub n: usize,
    pub h: f64,
    /// Time step.
    pub k: f64,
    /// Advection speed; zero freezes the field.
    pub c: f64,
    /// Advection direction in radians.
    pub angle: f64,
    pub steps: usize,
    pub record_stride: usize,
    /// Amplitude of uniform random noise added to the initial data.
    pub noise: f64,
    pub seed: u64,
}

impl SimulationConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(operator: OperatorSpec, marcher: Marcher, n: usize, h: f64, k: f64, c: f64, angle: f64, steps: usize) -> Self {
        Self { operator, marcher, n, h, k, c, angle, steps, record_stride: 1, noise: 0.0, seed: 0 }
    }

    pub fn courant(&self) -> f64 {
        self.c * self.k / self.h
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 16 || !self.n.is_multiple_of(2) {
            return Err(Error::invalid(format!("grid size must be even and >= 16, got {}", self.n)));
        }
        for (name, v) in [("h", self.h), ("k", self.k)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(self.c >= 0.0 && self.c.is_finite()) || !self.angle.is_finite() {
            return Err(Error::invalid("velocity must be finite and non-negative with a finite angle"));
        }
        if self.steps == 0 || self.record_stride == 0 {
            return Err(Error::invalid("steps and record_stride must be at least 1"));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::invalid("noise amplitude must be finite and non-negative"));
        }
        if let Some(r) = self.operator.radius() {
            if 2 * r >= self.n {
                return Err(Error::invalid(format!("stencil radius {r} does not fit a periodic grid of {}", self.n)));
            }
        }
        Ok(())
    }

    /// A warning when the time step looks too large for the marcher, judged
    /// from the largest eigenvalue of the discrete operator over the grid.
    pub fn cfl_advisory(&self) -> Result<Option<String>> {
        let taps = Taps::advection(&self.operator, self.n, self.angle, Sweep::Central)?;
        let half = self.n as i64 / 2;
        let mut max = 0.0f64;
        for my in -half + 1..=half {
            for mx in -half + 1..=half {
                max = max.max(taps.symbol(self.n, mx, my).norm());
            }
        }
        let nu = self.courant() * max;
        let limit = match self.marcher {
            Marcher::LeapFrog | Marcher::MacCormack => 1.0,
            Marcher::Rk4 => 2.0 * std::f64::consts::SQRT_2,
        };
        Ok((nu > limit).then(|| {
            format!("largest k*lambda = {nu:.4} exceeds {limit:.4}, the {} stability bound", self.marcher.name())
        }))
    }
}

/// Initial data.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// `cos(k . x)` for the grid mode nearest to magnitude `kh` along `angle`.
    PlaneWave { kh: f64, angle: f64 },
    /// `cos(2 pi (mx i + my j)/n)`.
    Mode { mx: i64, my: i64 },
    /// Gaussian of standard deviation `width` (in units of `h`) centred in
    /// the domain.
    Gaussian { width: f64 },
    Field(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub field: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldHistory {
    pub n: usize,
    pub h: f64,
    pub record_stride: usize,
    pub snapshots: Vec<Snapshot>,
}

impl FieldHistory {
    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("a history always holds the initial field")
    }
}

pub fn l2_norm(u: &[f64]) -> f64 {
    u.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn mode_field(n: usize, mx: i64, my: i64, factor: Complex64) -> Vec<f64> {
    let table: Vec<Complex64> =
        (0..n).map(|p| factor * Complex64::from_polar(1.0, 2.0 * PI * p as f64 / n as f64)).collect();
    let mut u = vec![0.0; n * n];
    for j in 0..n {
        for i in 0..n {
            let p = (mx * i as i64 + my * j as i64).rem_euclid(n as i64) as usize;
            u[j * n + i] = table[p].re;
        }
    }
    u
}

fn initial_mode(cfg: &SimulationConfig, init: &InitialCondition) -> Option<(i64, i64)> {
    match *init {
        InitialCondition::PlaneWave { kh, angle } => {
            let m = snap_mode(cfg.n, kh, angle);
            Some((m.mx, m.my))
        }
        InitialCondition::Mode { mx, my } => Some((mx, my)),
        _ => None,
    }
}

fn initial_field(cfg: &SimulationConfig, init: &InitialCondition) -> Result<Vec<f64>> {
    let n = cfg.n;
    let mut u = match (init, initial_mode(cfg, init)) {
        (_, Some((mx, my))) => mode_field(n, mx, my, Complex64::new(1.0, 0.0)),
        (InitialCondition::Gaussian { width }, _) => {
            if !(*width > 0.0) {
                return Err(Error::invalid("gaussian width must be positive"));
            }
            let centre = n as f64 / 2.0;
            let mut u = vec![0.0; n * n];
            for j in 0..n {
                for i in 0..n {
                    let r2 = (i as f64 - centre).powi(2) + (j as f64 - centre).powi(2);
                    u[j * n + i] = (-0.5 * r2 / (width * width)).exp();
                }
            }
            u
        }
        (InitialCondition::Field(f), _) => {
            if f.len() != n * n {
                return Err(Error::invalid(format!("initial field has {} values, expected {}", f.len(), n * n)));
            }
            f.clone()
        }
        _ => unreachable!("plane waves and modes always resolve to a grid mode"),
    };
    add_noise(cfg, &mut u);
    Ok(u)
}

fn noise_values(cfg: &SimulationConfig) -> Option<Vec<f64>> {
    (cfg.noise > 0.0).then(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..cfg.n * cfg.n).map(|_| cfg.noise * rng.gen_range(-1.0..1.0)).collect()
    })
}

fn add_noise(cfg: &SimulationConfig, u: &mut [f64]) {
    if let Some(noise) = noise_values(cfg) {
        for (x, e) in u.iter_mut().zip(noise) {
            *x += e;
        }
    }
}

fn check_finite(u: &[f64], step: usize) -> Result<()> {
    if u.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Divergence { step })
    }
}

struct Stepper {
    n: usize,
    k: f64,
    scale: f64,
    central: Taps,
    forward: Taps,
    backward: Taps,
    work: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl Stepper {
    fn new(cfg: &SimulationConfig) -> Result<Self> {
        let n = cfg.n;
        let central = Taps::advection(&cfg.operator, n, cfg.angle, Sweep::Central)?;
        let (forward, backward) = match (&cfg.operator, cfg.marcher) {
            (OperatorSpec::Prefactored(_), Marcher::MacCormack) => (
                Taps::advection(&cfg.operator, n, cfg.angle, Sweep::Forward)?,
                Taps::advection(&cfg.operator, n, cfg.angle, Sweep::Backward)?,
            ),
            _ => (central.clone(), central.clone()),
        };
        let z = vec![0.0; n * n];
        Ok(Self {
            n,
            k: cfg.k,
            scale: -cfg.c / cfg.h,
            central,
            forward,
            backward,
            work: [z.clone(), z.clone(), z.clone(), z.clone()],
            tmp: z,
        })
    }

    fn rk4(&mut self, u: &mut [f64]) {
        let (n, k, s) = (self.n, self.k, self.scale);
        let [k1, k2, k3, k4] = &mut self.work;
        let tmp = &mut self.tmp;
        self.central.apply(u, k1, n, s);
        for ((t, x), d) in tmp.iter_mut().zip(u.iter()).zip(k1.iter()) {
            *t = x + 0.5 * k * d;
        }
        self.central.apply(tmp, k2, n, s);
        for ((t, x), d) in tmp.iter_mut().zip(u.iter()).zip(k2.iter()) {
            *t = x + 0.5 * k * d;
        }
        self.central.apply(tmp, k3, n, s);
        for ((t, x), d) in tmp.iter_mut().zip(u.iter()).zip(k3.iter()) {
            *t = x + k * d;
        }
        self.central.apply(tmp, k4, n, s);
        for (p, x) in u.iter_mut().enumerate() {
            *x += k / 6.0 * (k1[p] + 2.0 * k2[p] + 2.0 * k3[p] + k4[p]);
        }
    }

    fn leapfrog(&mut self, prev: &mut Vec<f64>, u: &mut Vec<f64>) {
        let (n, k, s) = (self.n, self.k, self.scale);
        let d = &mut self.work[0];
        self.central.apply(u, d, n, s);
        for (p, x) in prev.iter_mut().enumerate() {
            *x += 2.0 * k * d[p];
        }
        std::mem::swap(prev, u);
    }

    fn maccormack(&mut self, u: &mut [f64]) {
        let (n, k, s) = (self.n, self.k, self.scale);
        let [d, star, ..] = &mut self.work;
        self.forward.apply(u, d, n, s);
        for ((st, x), dv) in star.iter_mut().zip(u.iter()).zip(d.iter()) {
            *st = x + k * dv;
        }
        self.backward.apply(star, d, n, s);
        for (p, x) in u.iter_mut().enumerate() {
            *x = 0.5 * (*x + star[p] + k * d[p]);
        }
    }
}

/// Advances the configured problem, handing every step's field to
/// `observe` (starting with step 0).
pub fn march<F>(cfg: &SimulationConfig, init: &InitialCondition, mut observe: F) -> Result<()>
where
    F: FnMut(usize, &[f64]) -> Result<()>,
{
    cfg.validate()?;
    let mut u = initial_field(cfg, init)?;
    check_finite(&u, 0)?;
    observe(0, &u)?;
    let mut stepper = Stepper::new(cfg)?;
    match cfg.marcher {
        Marcher::Rk4 => {
            for step in 1..=cfg.steps {
                stepper.rk4(&mut u);
                check_finite(&u, step)?;
                observe(step, &u)?;
            }
        }
        Marcher::MacCormack => {
            for step in 1..=cfg.steps {
                stepper.maccormack(&mut u);
                check_finite(&u, step)?;
                observe(step, &u)?;
            }
        }
        Marcher::LeapFrog => {
            let mut prev = u.clone();
            match initial_mode(cfg, init) {
                // start a single mode on the physical root of the leap-frog
                // recurrence so no computational mode is excited
                Some((mx, my)) => {
                    let mu = cfg.k * (-stepper.scale) * stepper.central.symbol(cfg.n, mx, my);
                    let g = -mu + (mu * mu + 1.0).sqrt();
                    u = mode_field(cfg.n, mx, my, g);
                    add_noise(cfg, &mut u);
                }
                None => stepper.rk4(&mut u),
            }
            check_finite(&u, 1)?;
            observe(1, &u)?;
            for step in 2..=cfg.steps {
                stepper.leapfrog(&mut prev, &mut u);
                check_finite(&u, step)?;
                observe(step, &u)?;
            }
        }
    }
    Ok(())
}

/// Runs the configured problem and records every `record_stride`-th field
/// plus the final one.
pub fn run_advection2d(cfg: &SimulationConfig, init: &InitialCondition) -> Result<FieldHistory> {
    let mut snapshots = Vec::new();
    march(cfg, init, |step, u| {
        if step % cfg.record_stride == 0 || step == cfg.steps {
            snapshots.push(Snapshot { step, time: step as f64 * cfg.k, field: u.to_vec() });
        }
        Ok(())
    })?;
    Ok(FieldHistory { n: cfg.n, h: cfg.h, record_stride: cfg.record_stride, snapshots })
}
