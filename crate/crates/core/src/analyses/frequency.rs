//! Small-signal frequency response of the receiver.
//!
//! One molecule's air concentration oscillates as c(t) = A(1 + cos(2πft))
//! while the other two are zero. After discarding the first quarter of the
//! run (startup transient), the internal HOL concentration c_o is fitted to
//! B0 + B·cos(2πft + φ) by linear least squares at the known frequency; the
//! reported gain is B over A expressed in µmol/L.

use super::CampaignRun;
use crate::config::ScenarioConfig;
use crate::error::{GlvError, Result};
use crate::exec::{map_items, ExecMode};
use crate::molecule::{Molecule, PerMolecule};
use crate::output::{sci, CsvTable};
use crate::receiver::{integrate_with, ReceiverState};

#[derive(Debug, Clone, Copy)]
pub struct FrequencyPoint {
    pub molecule: Molecule,
    pub frequency_hz: f64,
    /// |H| = B / (A in µmol/L), dimensionless.
    pub gain: f64,
    pub phase_rad: f64,
    /// RMS fit residual relative to the fitted amplitude B.
    pub residual_rel: f64,
    /// Set when the residual exceeds 20% of B (nonlinearity leakage).
    pub fit_warning: bool,
}

/// Streaming accumulator for the 3-parameter cosine fit.
#[derive(Default)]
struct FitSums {
    n: f64,
    c: f64,
    s: f64,
    cc: f64,
    ss: f64,
    cs: f64,
    y: f64,
    yc: f64,
    ys: f64,
    yy: f64,
}

impl FitSums {
    fn push(&mut self, cos_wt: f64, sin_wt: f64, y: f64) {
        self.n += 1.0;
        self.c += cos_wt;
        self.s += sin_wt;
        self.cc += cos_wt * cos_wt;
        self.ss += sin_wt * sin_wt;
        self.cs += cos_wt * sin_wt;
        self.y += y;
        self.yc += y * cos_wt;
        self.ys += y * sin_wt;
        self.yy += y * y;
    }

    /// Solve the normal equations for (B0, Bc, Bs) and the residual RMS.
    fn solve(&self) -> Result<([f64; 3], f64)> {
        let mut a = [
            [self.n, self.c, self.s],
            [self.c, self.cc, self.cs],
            [self.s, self.cs, self.ss],
        ];
        let mut b = [self.y, self.yc, self.ys];
        // Gaussian elimination with partial pivoting on the 3x3 system.
        for col in 0..3 {
            let pivot = (col..3)
                .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
                .unwrap();
            if a[pivot][col].abs() < 1e-300 {
                return Err(GlvError::Numeric("singular frequency-fit system".into()));
            }
            a.swap(col, pivot);
            b.swap(col, pivot);
            for row in col + 1..3 {
                let f = a[row][col] / a[col][col];
                for k in col..3 {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
        let mut x = [0.0f64; 3];
        for row in (0..3).rev() {
            let mut acc = b[row];
            for k in row + 1..3 {
                acc -= a[row][k] * x[k];
            }
            x[row] = acc / a[row][row];
        }
        // SSE = y'y - 2 x'(X'y) + x'(X'X)x, all available from the sums.
        let xty = [self.y, self.yc, self.ys];
        let xtx = [
            [self.n, self.c, self.s],
            [self.c, self.cc, self.cs],
            [self.s, self.cs, self.ss],
        ];
        let mut quad = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                quad += x[i] * xtx[i][j] * x[j];
            }
        }
        let sse = (self.yy - 2.0 * (x[0] * xty[0] + x[1] * xty[1] + x[2] * xty[2]) + quad).max(0.0);
        Ok((x, (sse / self.n).sqrt()))
    }
}

fn response_at(
    cfg: &ScenarioConfig,
    molecule: Molecule,
    frequency_hz: f64,
) -> Result<FrequencyPoint> {
    let fr = &cfg.campaigns.frequency_response;
    let fs = cfg.timing.sample_rate_hz;
    let amplitude = fr.amplitude_mol_per_m3;
    let duration_s = fr.n_periods as f64 / frequency_hz;
    let n = (duration_s * fs).ceil() as usize;
    let dt = 1.0 / fs;
    let omega = 2.0 * std::f64::consts::PI * frequency_hz;

    let traces = PerMolecule::splat(()).map(|m, _| {
        if m == molecule {
            (0..n).map(|k| amplitude * (1.0 + (omega * k as f64 * dt).cos())).collect()
        } else {
            vec![0.0; n]
        }
    });

    let settle_s = 0.25 * duration_s;
    let mut sums = FitSums::default();
    integrate_with(
        &traces,
        &cfg.receiver_params()?,
        fs,
        ReceiverState::default(),
        |rec| {
            if rec.time_s >= settle_s {
                let (sin_wt, cos_wt) = (omega * rec.time_s).sin_cos();
                sums.push(cos_wt, sin_wt, rec.state.c_o);
            }
        },
    )?;
    let ([_, bc, bs], rms) = sums.solve()?;
    let b = bc.hypot(bs);
    // B·cos(ωt + φ) = B cosφ·cos(ωt) − B sinφ·sin(ωt)
    let phase = (-bs).atan2(bc);
    let amplitude_um = amplitude * 1e3; // mol/m³ → µmol/L
    let residual_rel = if b > 0.0 { rms / b } else { f64::INFINITY };
    Ok(FrequencyPoint {
        molecule,
        frequency_hz,
        gain: b / amplitude_um,
        phase_rad: phase,
        residual_rel,
        fit_warning: residual_rel > 0.2,
    })
}

pub fn run_frequency_response(cfg: &ScenarioConfig, mode: ExecMode) -> Result<Vec<FrequencyPoint>> {
    let mut cells: Vec<(Molecule, f64)> = Vec::new();
    for m in Molecule::ALL {
        for &f in &cfg.campaigns.frequency_response.frequencies_hz {
            cells.push((m, f));
        }
    }
    map_items(mode, &cells, |&(m, f)| response_at(cfg, m, f))
        .into_iter()
        .collect()
}

pub(super) fn campaign(cfg: &ScenarioConfig, mode: ExecMode) -> Result<CampaignRun> {
    let points = run_frequency_response(cfg, mode)?;
    let mut t = CsvTable::new([
        "molecule",
        "frequency_hz",
        "gain",
        "phase_rad",
        "residual_rel",
        "fit_warning",
    ]);
    t.comment("gain: fitted c_o oscillation amplitude over the input amplitude in umol/L");
    t.comment("fit_warning: 1 when the RMS fit residual exceeds 20% of the fitted amplitude");
    for p in &points {
        t.push_row([
            p.molecule.tag().to_string(),
            sci(p.frequency_hz),
            sci(p.gain),
            sci(p.phase_rad),
            sci(p.residual_rel),
            (p.fit_warning as u8).to_string(),
        ])?;
    }
    let warnings = points.iter().filter(|p| p.fit_warning).count();
    let summary = format!(
        "frequency_response: {} points, {} fit warnings\n",
        points.len(),
        warnings
    );
    Ok(CampaignRun { files: vec![("frequency_response.csv".into(), t)], summary })
}
