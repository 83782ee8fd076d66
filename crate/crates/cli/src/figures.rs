//! Data behind each figure and the summary table. Panels reuse the scenario
//! file for physics, trials, seed and drop geometry, and override the array
//! size, user count and sweep; the choice is recorded in the CSV metadata.

use raqmimo_core::rates::{comparison_suite, RateCase};
use raqmimo_core::transduction::{superposition_error, ReceiverPhysics, SensingRegime};
use raqmimo_core::units::{dbvm_to_vpm, linear_to_db};

use crate::config::{Receiver, ScenarioConfig, SweepAxis};
use crate::error::CliResult;
use crate::feasible::feasible_artifact;
use crate::output::{num, CsvArtifact};
use crate::scenario::{evaluate, rates_artifact, RatePoint, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig3d,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig4d,
    Fig4e,
    Fig4f,
    Fig5,
    Table1,
}

impl FigureId {
    pub fn name(self) -> String {
        format!("{self:?}").to_lowercase()
    }
}

fn range(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

fn with_array(cfg: &ScenarioConfig, m: usize, k: usize) -> ScenarioConfig {
    let mut c = cfg.clone();
    c.channel.m_sensors = m;
    c.channel.k_users = k;
    c.run.sweep = None;
    c
}

fn relabel(points: &mut [RatePoint], suffix: &str) {
    for p in points {
        p.label.push_str(suffix);
    }
}

pub fn figure(id: FigureId, cfg: &ScenarioConfig, config_bytes: &[u8]) -> CliResult<CsvArtifact> {
    let regime = cfg.physics.regime;
    let quantum = |c: RateCase| Series::plain(c, Receiver::Quantum, regime);
    let all: Vec<Series> = RateCase::ALL.into_iter().map(quantum).collect();
    let m_grid = range(100.0, 1000.0, 100.0);
    let k_grid = range(5.0, 40.0, 5.0);
    let p_grid = range(-20.0, 40.0, 5.0);

    let (points, axis, interpretation) = match id {
        FigureId::Fig2a => return linearization_figure(cfg, config_bytes),
        FigureId::Fig2b => {
            let mut a = feasible_artifact(cfg, config_bytes)?;
            a.note("figure", id.name());
            return Ok(a);
        }
        FigureId::Fig5 => return comparison_figure(cfg, config_bytes),
        FigureId::Table1 => return comparison_table(cfg, config_bytes),
        FigureId::Fig3a => {
            let mut pts = Vec::new();
            for m in [200, 1000] {
                let series = [quantum(RateCase::MRC_UFC), quantum(RateCase::MRC_CFC)];
                let mut p = evaluate(&with_array(cfg, m, 20), &series, SweepAxis::Power, &p_grid)?;
                relabel(&mut p, &format!("@M={m}"));
                pts.extend(p);
            }
            (pts, SweepAxis::Power, "MRC vs transmit power, K=20, M in {200,1000}")
        }
        FigureId::Fig3b => {
            let mut c = with_array(cfg, 100, 20);
            c.run.total_power_dbm = Some(cfg.run.p_s_dbm + 10.0);
            (evaluate(&c, &all, SweepAxis::Sensors, &m_grid)?, SweepAxis::Sensors, "per-user power E/M with E = 10 P_s, K=20")
        }
        FigureId::Fig3c => (
            evaluate(&with_array(cfg, 100, 20), &all, SweepAxis::Sensors, &m_grid)?,
            SweepAxis::Sensors,
            "fixed P_s, K=20",
        ),
        FigureId::Fig3d => (
            evaluate(&with_array(cfg, 1000, 5), &all, SweepAxis::Users, &k_grid)?,
            SweepAxis::Users,
            "fixed P_s, M=1000",
        ),
        FigureId::Fig4a | FigureId::Fig4b | FigureId::Fig4c | FigureId::Fig4d | FigureId::Fig4e | FigureId::Fig4f => {
            let case = match id {
                FigureId::Fig4a | FigureId::Fig4c | FigureId::Fig4e => RateCase::MRC_UFC,
                _ => RateCase::ZF_UFC,
            };
            let series = vec![
                Series { label: format!("SQL_{case}"), case, receiver: Receiver::Quantum, regime: SensingRegime::Sql },
                Series { label: format!("PSL_{case}"), case, receiver: Receiver::Quantum, regime: SensingRegime::Psl },
                Series { label: format!("MMIMO_{case}"), case, receiver: Receiver::Classical, regime },
            ];
            match id {
                FigureId::Fig4a | FigureId::Fig4b => (
                    evaluate(&with_array(cfg, 100, 10), &series, SweepAxis::Sensors, &m_grid)?,
                    SweepAxis::Sensors,
                    "quantum SQL/PSL vs classical array, UFC, fixed P_s, K=10",
                ),
                FigureId::Fig4c | FigureId::Fig4d => (
                    evaluate(&with_array(cfg, 1000, 5), &series, SweepAxis::Users, &k_grid)?,
                    SweepAxis::Users,
                    "quantum SQL/PSL vs classical array, UFC, fixed P_s, M=1000",
                ),
                _ => (
                    evaluate(&with_array(cfg, 1000, 10), &series, SweepAxis::Power, &p_grid)?,
                    SweepAxis::Power,
                    "quantum SQL/PSL vs classical array, UFC, M=1000, K=10",
                ),
            }
        }
    };
    let mut a = rates_artifact(&points, config_bytes, cfg.run.master_seed);
    a.note("figure", id.name());
    a.note("sweep_axis", axis.label());
    a.note("interpretation", interpretation);
    Ok(a)
}

/// Exact BCOD output and first-order amplitude model against their linear
/// forms, vs the summed user amplitude (dB V/m), users in phase.
fn linearization_figure(cfg: &ScenarioConfig, config_bytes: &[u8]) -> CliResult<CsvArtifact> {
    let phys: &ReceiverPhysics = &cfg.physics.receiver;
    let u_y = phys.lo_field();
    let k = cfg.channel.k_users;
    let mut a = CsvArtifact::new("raqmimo-fig2a/1", &["sweep_value", "case", "relative_error"], config_bytes);
    for total_dbvm in range(-70.0, 0.0, 2.0) {
        let u = vec![dbvm_to_vpm(total_dbvm) / k as f64; k];
        let th = vec![0.0; k];
        a.push(vec![num(total_dbvm), "bcod".into(), num(phys.bcod_linearization_error(&u, &th)?)]);
        a.push(vec![num(total_dbvm), "superposition".into(), num(superposition_error(u_y, &u, &th)?)]);
    }
    a.note("figure", "fig2a");
    a.note("lo_field_dbvm", num(phys.lo_field_dbvm));
    a.note("interpretation", format!("K={k} equal users in phase; sweep_value is the summed amplitude in dB V/m"));
    Ok(a)
}

fn regimes(cfg: &ScenarioConfig) -> CliResult<[(SensingRegime, f64); 2]> {
    Ok([
        (SensingRegime::Sql, cfg.snr_ratio_db(SensingRegime::Sql)?),
        (SensingRegime::Psl, cfg.snr_ratio_db(SensingRegime::Psl)?),
    ])
}

fn comparison_figure(cfg: &ScenarioConfig, config_bytes: &[u8]) -> CliResult<CsvArtifact> {
    let mut a = CsvArtifact::new(
        "raqmimo-fig5/1",
        &["nu", "regime", "snr_ratio_db", "power_factor", "distance_factor", "delta_rate"],
        config_bytes,
    );
    for (regime, pi_db) in regimes(cfg)? {
        for nu in range(2.0, 6.0, 0.25) {
            let f = comparison_suite(pi_db, nu)?;
            a.push(vec![
                num(nu),
                regime.label().into(),
                num(pi_db),
                num(f.power_factor),
                num(f.distance_factor),
                num(f.delta_rate),
            ]);
        }
    }
    a.note("figure", "fig5");
    Ok(a)
}

fn comparison_table(cfg: &ScenarioConfig, config_bytes: &[u8]) -> CliResult<CsvArtifact> {
    let mut a = CsvArtifact::new(
        "raqmimo-table1/1",
        &["regime", "snr_ratio_db", "power_reduction_db", "distance_factor_nu2", "distance_factor_nu6", "delta_rate"],
        config_bytes,
    );
    for (regime, pi_db) in regimes(cfg)? {
        let f2 = comparison_suite(pi_db, 2.0)?;
        let f6 = comparison_suite(pi_db, 6.0)?;
        a.push(vec![
            regime.label().into(),
            num(pi_db),
            num(linear_to_db(f2.power_factor)),
            num(f2.distance_factor),
            num(f6.distance_factor),
            num(f2.delta_rate),
        ]);
    }
    a.note("figure", "table1");
    Ok(a)
}
