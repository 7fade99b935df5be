//! CSV formats. UTF-8, LF line endings, a fixed header row, numbers in plain
//! decimal notation with the shortest representation that parses back exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, RunError};
use crate::mission::SiteTruth;
use crate::planner::{PolicySolution, StepGrid};
use crate::simulator::{AggregateStats, EpisodeLog, ScenarioConfig};

pub const POLICY_HEADER: &str = "site,alpha,beta,q0,q1,value,action";
pub const MISSION_HEADER: &str = "site,d,eta,d_tilde,d_hat";
pub const EPISODE_HEADER: &str = "episode,site,alpha,beta,a_r,a_h,eta,p,reward";

#[inline]
fn bit(b: bool) -> u8 {
    b as u8
}

fn write_file(path: &Path, text: &str) -> Result<(), RunError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| RunError::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| RunError::io(path, e))
}

/// One row of an exported policy grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyRow {
    pub site: usize,
    pub alpha: f64,
    pub beta: f64,
    pub q0: f64,
    pub q1: f64,
    pub value: f64,
    pub action: bool,
}

pub fn policy_rows(grid: &StepGrid) -> Vec<PolicyRow> {
    grid.iter()
        .map(|(b, c)| PolicyRow {
            site: grid.site,
            alpha: b.alpha(),
            beta: b.beta(),
            q0: c.q[0],
            q1: c.q[1],
            value: c.value,
            action: c.recommend_wear,
        })
        .collect()
}

pub fn policy_csv(grid: &StepGrid) -> String {
    let mut out = String::from(POLICY_HEADER);
    out.push('\n');
    for r in policy_rows(grid) {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.site,
            r.alpha,
            r.beta,
            r.q0,
            r.q1,
            r.value,
            bit(r.action)
        )
        .unwrap();
    }
    out
}

/// Writes the grid for one-based `site`, row-major in `(beta, alpha)`.
pub fn export_policy_grids(solution: &PolicySolution, site: usize, path: impl AsRef<Path>) -> Result<(), RunError> {
    let grid = solution
        .step_for_site(site)
        .ok_or_else(|| Error::invalid("site", format!("site {site} is not covered by the solution")))?;
    write_file(path.as_ref(), &policy_csv(grid))
}

pub fn read_policy_grid(path: impl AsRef<Path>) -> Result<Vec<PolicyRow>, RunError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    let bad = |line: usize, message: String| RunError::Csv {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == POLICY_HEADER => {}
        _ => return Err(bad(1, format!("expected header `{POLICY_HEADER}`"))),
    }
    let mut rows = Vec::new();
    for (n, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(bad(n + 1, format!("expected 7 fields, found {}", fields.len())));
        }
        let num = |k: usize| fields[k].parse::<f64>().map_err(|e| bad(n + 1, format!("column {k}: {e}")));
        let action = match fields[6] {
            "0" => false,
            "1" => true,
            other => return Err(bad(n + 1, format!("action must be 0 or 1, got `{other}`"))),
        };
        rows.push(PolicyRow {
            site: fields[0].parse().map_err(|e| bad(n + 1, format!("site: {e}")))?,
            alpha: num(1)?,
            beta: num(2)?,
            q0: num(3)?,
            q1: num(4)?,
            value: num(5)?,
            action,
        });
    }
    Ok(rows)
}

pub fn mission_csv(mission: &[SiteTruth]) -> String {
    let mut out = String::from(MISSION_HEADER);
    out.push('\n');
    for (k, s) in mission.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{}",
            k + 1,
            s.danger,
            bit(s.threat_present),
            s.reported,
            s.sensed
        )
        .unwrap();
    }
    out
}

pub fn write_mission(mission: &[SiteTruth], path: impl AsRef<Path>) -> Result<(), RunError> {
    write_file(path.as_ref(), &mission_csv(mission))
}

pub fn episode_csv(logs: &[EpisodeLog]) -> String {
    let mut out = String::from(EPISODE_HEADER);
    out.push('\n');
    for (e, log) in logs.iter().enumerate() {
        for r in &log.sites {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                e,
                r.site,
                r.belief_before.alpha(),
                r.belief_before.beta(),
                bit(r.recommend_wear),
                bit(r.wear),
                bit(r.threat_present),
                bit(r.success),
                r.reward
            )
            .unwrap();
        }
    }
    out
}

pub fn write_episode_logs(logs: &[EpisodeLog], path: impl AsRef<Path>) -> Result<(), RunError> {
    write_file(path.as_ref(), &episode_csv(logs))
}

pub fn stats_header() -> &'static str {
    "scenario,reward,assumed,actual,alpha1,beta1,kappa1,kappa2,n_episodes,\
mean_reward,std_reward,se_reward,mean_final_trust,std_final_trust,se_final_trust"
}

/// One aggregate row, without trailing newline.
pub fn stats_row(label: &str, scenario: &ScenarioConfig, stats: &AggregateStats) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        label,
        if scenario.reward_spec.trust_seeking { "trust_seeking" } else { "task" },
        scenario.assumed_model,
        scenario.actual_model,
        scenario.trust_params.alpha_init,
        scenario.trust_params.beta_init,
        scenario.env.kappa1,
        scenario.env.kappa2,
        stats.n_episodes,
        stats.mean_reward,
        stats.std_reward,
        stats.se_reward(),
        stats.mean_final_trust,
        stats.std_final_trust,
        stats.se_final_trust()
    )
}

pub fn write_stats(rows: &[String], path: impl AsRef<Path>) -> Result<(), RunError> {
    let mut out = String::from(stats_header());
    out.push('\n');
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    write_file(path.as_ref(), &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::BehaviorModel;
    use crate::planner::{backward_induction, Lattice, PlanningProblem};
    use crate::reward::RewardSpec;
    use crate::trust::TrustParams;

    fn small_solution() -> crate::planner::PolicySolution {
        let pr = PlanningProblem {
            current_site: 14,
            sensed_current: 0.8,
            reported_current: 0.6,
            reported_future: vec![0.3],
            assumed_model: BehaviorModel::ReversePsychology,
            reward_spec: RewardSpec::default(),
            trust_params: TrustParams::default(),
            discount: 0.9,
        };
        let lat = Lattice {
            alpha0: 10.0,
            beta0: 10.0,
            n_alpha: 2,
            n_beta: 2,
        };
        backward_induction(&pr, &lat).unwrap()
    }

    #[test]
    fn two_by_two_grid_round_trips() {
        let sol = small_solution();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.csv");
        export_policy_grids(&sol, 14, &path).unwrap();
        assert!(export_policy_grids(&sol, 3, &path).is_err());
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("site,alpha,beta,q0,q1,value,action\n"));
        assert!(!text.contains('\r'));

        let rows = read_policy_grid(&path).unwrap();
        assert_eq!(rows, policy_rows(sol.first()));
        for r in &rows {
            assert_eq!(r.value, r.q0.max(r.q1));
            assert_eq!(r.site, 14);
        }
        // row-major in (beta, alpha)
        let order: Vec<(f64, f64)> = rows.iter().map(|r| (r.alpha, r.beta)).collect();
        assert_eq!(order, vec![(10.0, 10.0), (20.0, 10.0), (10.0, 30.0), (20.0, 30.0)]);
    }

    #[test]
    fn malformed_grid_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, format!("{POLICY_HEADER}\n1,2,3,4,5,6,7\n")).unwrap();
        assert!(matches!(read_policy_grid(&path), Err(RunError::Csv { line: 2, .. })));
        assert!(matches!(read_policy_grid(dir.path().join("missing.csv")), Err(RunError::Io { .. })));
    }

    #[test]
    fn decimal_notation_only() {
        let mission = [SiteTruth {
            danger: 1e-7,
            threat_present: false,
            reported: 1e-6,
            sensed: 0.999999,
        }];
        let text = mission_csv(&mission);
        assert_eq!(text, "site,d,eta,d_tilde,d_hat\n1,0.0000001,0,0.000001,0.999999\n");
    }
}
