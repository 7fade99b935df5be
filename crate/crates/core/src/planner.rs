//! Finite-horizon backward induction over the trust-belief lattice.
//!
//! Beliefs reachable from an anchor `(alpha0, beta0)` are
//! `(alpha0 + i * w_success, beta0 + j * w_failure)`. Step `s` of a solve
//! covers every point reachable in `s` updates from the anchor rectangle, so
//! the successors `(i + 1, j)` and `(i, j + 1)` of each point are always
//! present in step `s + 1`.

use serde::{Deserialize, Serialize};

use crate::behavior::{check_open_unit, BehaviorModel};
use crate::error::{Error, Result};
use crate::mission::SiteTruth;
use crate::reward::{agreement_probability, expected_trust_bonus, task_reward_unchecked, RewardSpec};
use crate::trust::{TrustBelief, TrustParams};

/// Two q-values closer than this are treated as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PlanningProblem {
    /// One-based index of the site being decided.
    pub current_site: usize,
    /// Robot's estimate at the current site.
    pub sensed_current: f64,
    /// Intelligence report at the current site, used by a disuse human.
    pub reported_current: f64,
    /// Intelligence reports for the remaining sites after the current one.
    pub reported_future: Vec<f64>,
    pub assumed_model: BehaviorModel,
    pub reward_spec: RewardSpec,
    pub trust_params: TrustParams,
    pub discount: f64,
}

impl PlanningProblem {
    /// Problem faced at one-based `site` of `mission`.
    pub fn at_site(
        mission: &[SiteTruth],
        site: usize,
        assumed_model: BehaviorModel,
        reward_spec: RewardSpec,
        trust_params: TrustParams,
        discount: f64,
    ) -> Result<Self> {
        if site == 0 || site > mission.len() {
            return Err(Error::ZeroHorizon);
        }
        let here = &mission[site - 1];
        Ok(Self {
            current_site: site,
            sensed_current: here.sensed,
            reported_current: here.reported,
            reported_future: mission[site..].iter().map(|s| s.reported).collect(),
            assumed_model,
            reward_spec,
            trust_params,
            discount,
        })
    }

    pub fn horizon(&self) -> usize {
        1 + self.reported_future.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.current_site == 0 {
            return Err(Error::invalid("current_site", "sites are numbered from 1"));
        }
        if !(self.discount > 0.0 && self.discount <= 1.0) {
            return Err(Error::invalid("discount", format!("must lie in (0, 1], got {}", self.discount)));
        }
        check_open_unit("sensed_current", self.sensed_current)?;
        check_open_unit("reported_current", self.reported_current)?;
        for &r in &self.reported_future {
            check_open_unit("reported_future", r)?;
        }
        self.trust_params.validate()?;
        self.reward_spec.validate()
    }

    /// Threat probability the planner assumes at zero-based `step`.
    #[inline]
    pub fn threat_prob(&self, step: usize) -> f64 {
        if step == 0 {
            self.sensed_current
        } else {
            self.reported_future[step - 1]
        }
    }

    /// Report the simulated human relies on at zero-based `step`.
    #[inline]
    pub fn reported(&self, step: usize) -> f64 {
        if step == 0 {
            self.reported_current
        } else {
            self.reported_future[step - 1]
        }
    }

    /// Expected immediate reward of `recommend_wear` at `step`.
    #[inline]
    pub fn immediate_reward(&self, step: usize, belief: &TrustBelief, recommend_wear: bool) -> f64 {
        let d = self.threat_prob(step);
        task_reward_unchecked(
            belief,
            self.assumed_model,
            recommend_wear,
            d,
            self.reported(step),
            &self.reward_spec,
        ) + expected_trust_bonus(self.current_site + step, recommend_wear, d, &self.reward_spec)
    }

    /// Successor beliefs and their probabilities: `[(success, p), (failure, 1 - p)]`.
    pub fn transitions(&self, step: usize, belief: &TrustBelief, recommend_wear: bool) -> [(TrustBelief, f64); 2] {
        transition_probabilities(belief, recommend_wear, self.threat_prob(step), &self.trust_params)
    }

    #[inline]
    fn tie_break(&self, step: usize) -> bool {
        self.threat_prob(step) >= 0.5
    }
}

pub fn transition_probabilities(
    belief: &TrustBelief,
    recommend_wear: bool,
    threat_prob: f64,
    params: &TrustParams,
) -> [(TrustBelief, f64); 2] {
    let p = agreement_probability(recommend_wear, threat_prob);
    [(belief.update(true, params), p), (belief.update(false, params), 1.0 - p)]
}

/// Anchor rectangle of the belief lattice at the first step of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub alpha0: f64,
    pub beta0: f64,
    pub n_alpha: usize,
    pub n_beta: usize,
}

impl Lattice {
    pub fn single(belief: TrustBelief) -> Self {
        Self {
            alpha0: belief.alpha(),
            beta0: belief.beta(),
            n_alpha: 1,
            n_beta: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_alpha == 0 || self.n_beta == 0 {
            return Err(Error::invalid("lattice", "extents must be positive"));
        }
        TrustBelief::new(self.alpha0, self.beta0)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyCell {
    pub value: f64,
    pub recommend_wear: bool,
    /// Q-values of recommending no gear and recommending gear.
    pub q: [f64; 2],
}

impl PolicyCell {
    const EMPTY: PolicyCell = PolicyCell {
        value: f64::NAN,
        recommend_wear: false,
        q: [f64::NAN; 2],
    };
}

/// Values and actions of one step over its lattice points.
#[derive(Debug, Clone, PartialEq)]
pub struct StepGrid {
    /// One-based mission site of this step.
    pub site: usize,
    n_alpha: usize,
    n_beta: usize,
    max_offset: usize,
    alpha0: f64,
    beta0: f64,
    w_success: f64,
    w_failure: f64,
    cells: Vec<PolicyCell>,
}

impl StepGrid {
    fn new(site: usize, lattice: &Lattice, params: &TrustParams, step: usize) -> Self {
        let n_alpha = lattice.n_alpha + step;
        let n_beta = lattice.n_beta + step;
        Self {
            site,
            n_alpha,
            n_beta,
            max_offset: lattice.n_alpha + lattice.n_beta - 2 + step,
            alpha0: lattice.alpha0,
            beta0: lattice.beta0,
            w_success: params.w_success,
            w_failure: params.w_failure,
            cells: vec![PolicyCell::EMPTY; n_alpha * n_beta],
        }
    }

    #[inline]
    pub fn contains_index(&self, i: usize, j: usize) -> bool {
        i < self.n_alpha && j < self.n_beta && i + j <= self.max_offset
    }

    #[inline]
    pub fn belief_at(&self, i: usize, j: usize) -> TrustBelief {
        TrustBelief::new(
            self.alpha0 + i as f64 * self.w_success,
            self.beta0 + j as f64 * self.w_failure,
        )
        .expect("lattice points are positive")
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> Option<&PolicyCell> {
        self.contains_index(i, j).then(|| &self.cells[j * self.n_alpha + i])
    }

    /// Lattice indices of `belief`, if it lies on this grid.
    pub fn index_of(&self, belief: &TrustBelief) -> Option<(usize, usize)> {
        let locate = |x: f64, x0: f64, w: f64| -> Option<usize> {
            let k = ((x - x0) / w).round();
            let tol = 1e-9 * x.abs().max(1.0);
            (k >= 0.0 && (x0 + k * w - x).abs() <= tol).then_some(k as usize)
        };
        let i = locate(belief.alpha(), self.alpha0, self.w_success)?;
        let j = locate(belief.beta(), self.beta0, self.w_failure)?;
        self.contains_index(i, j).then_some((i, j))
    }

    pub fn lookup(&self, belief: &TrustBelief) -> Option<&PolicyCell> {
        self.index_of(belief).and_then(|(i, j)| self.cell(i, j))
    }

    pub fn value_of(&self, belief: &TrustBelief) -> Option<f64> {
        self.lookup(belief).map(|c| c.value)
    }

    /// All lattice points, row-major in `(beta, alpha)`.
    pub fn iter(&self) -> impl Iterator<Item = (TrustBelief, &PolicyCell)> + '_ {
        (0..self.n_beta)
            .flat_map(move |j| (0..self.n_alpha).map(move |i| (i, j)))
            .filter(move |&(i, j)| self.contains_index(i, j))
            .map(move |(i, j)| (self.belief_at(i, j), &self.cells[j * self.n_alpha + i]))
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicySolution {
    pub lattice: Lattice,
    /// One grid per remaining step; `steps[0]` is the current site.
    pub steps: Vec<StepGrid>,
}

impl PolicySolution {
    pub fn first(&self) -> &StepGrid {
        &self.steps[0]
    }

    pub fn step_for_site(&self, site: usize) -> Option<&StepGrid> {
        self.steps.iter().find(|g| g.site == site)
    }

    pub fn value(&self, belief: &TrustBelief) -> Result<f64> {
        self.first()
            .value_of(belief)
            .ok_or(Error::OffLattice {
                alpha: belief.alpha(),
                beta: belief.beta(),
            })
    }
}

/// Q-value of `recommend_wear` at `step`, continuing with `next` (absent at the
/// final step). A successor missing from `next` is an error.
pub fn q_value(
    problem: &PlanningProblem,
    step: usize,
    belief: &TrustBelief,
    recommend_wear: bool,
    next: Option<&StepGrid>,
) -> Result<f64> {
    if step >= problem.horizon() {
        return Err(Error::invalid("step", format!("step {step} beyond horizon {}", problem.horizon())));
    }
    let reward = problem.immediate_reward(step, belief, recommend_wear);
    if step + 1 == problem.horizon() {
        return Ok(reward);
    }
    let next = next.ok_or_else(|| Error::invalid("next_values", "required before the final step"))?;
    let mut continuation = 0.0;
    for (succ, p) in problem.transitions(step, belief, recommend_wear) {
        let v = next.value_of(&succ).ok_or(Error::OffLattice {
            alpha: succ.alpha(),
            beta: succ.beta(),
        })?;
        continuation += p * v;
    }
    Ok(reward + problem.discount * continuation)
}

#[inline]
fn choose(problem: &PlanningProblem, step: usize, q: [f64; 2]) -> (f64, bool) {
    let [q0, q1] = q;
    if (q1 - q0).abs() <= TIE_TOLERANCE {
        let a = problem.tie_break(step);
        (if a { q1 } else { q0 }, a)
    } else if q1 > q0 {
        (q1, true)
    } else {
        (q0, false)
    }
}

pub fn backward_induction(problem: &PlanningProblem, lattice: &Lattice) -> Result<PolicySolution> {
    problem.validate()?;
    lattice.validate()?;
    let horizon = problem.horizon();
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    let params = &problem.trust_params;
    let mut steps: Vec<StepGrid> = Vec::with_capacity(horizon);
    for step in (0..horizon).rev() {
        let mut grid = StepGrid::new(problem.current_site + step, lattice, params, step);
        let d = problem.threat_prob(step);
        let next = steps.last();
        for j in 0..grid.n_beta {
            for i in 0..grid.n_alpha {
                if !grid.contains_index(i, j) {
                    continue;
                }
                let belief = grid.belief_at(i, j);
                let mut q = [0.0; 2];
                for (slot, a) in q.iter_mut().zip([false, true]) {
                    let mut v = problem.immediate_reward(step, &belief, a);
                    if let Some(next) = next {
                        let p = agreement_probability(a, d);
                        let up = next.cell(i + 1, j).expect("success successor on lattice").value;
                        let down = next.cell(i, j + 1).expect("failure successor on lattice").value;
                        v += problem.discount * (p * up + (1.0 - p) * down);
                    }
                    *slot = v;
                }
                let (value, recommend_wear) = choose(problem, step, q);
                grid.cells[j * grid.n_alpha + i] = PolicyCell {
                    value,
                    recommend_wear,
                    q,
                };
            }
        }
        steps.push(grid);
    }
    steps.reverse();
    Ok(PolicySolution {
        lattice: *lattice,
        steps,
    })
}

/// Stored optimal recommendation at `belief` for the current site.
pub fn optimal_action(solution: &PolicySolution, belief: &TrustBelief) -> Result<bool> {
    solution
        .first()
        .lookup(belief)
        .map(|c| c.recommend_wear)
        .ok_or(Error::OffLattice {
            alpha: belief.alpha(),
            beta: belief.beta(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(model: BehaviorModel, sensed: f64, future: Vec<f64>) -> PlanningProblem {
        PlanningProblem {
            current_site: 16 - (1 + future.len()),
            sensed_current: sensed,
            reported_current: 0.5,
            reported_future: future,
            assumed_model: model,
            reward_spec: RewardSpec::default(),
            trust_params: TrustParams::default(),
            discount: 0.9,
        }
    }

    fn b(a: f64, c: f64) -> TrustBelief {
        TrustBelief::new(a, c).unwrap()
    }

    #[test]
    fn transitions_follow_agreement() {
        let p = TrustParams::default();
        let [(s, ps), (f, pf)] = transition_probabilities(&b(100.0, 50.0), true, 0.8, &p);
        assert_eq!((s, f), (b(110.0, 50.0), b(100.0, 70.0)));
        assert!((ps - 0.8).abs() < 1e-15 && (pf - 0.2).abs() < 1e-15);
        let [(_, ps), (_, pf)] = transition_probabilities(&b(100.0, 50.0), false, 0.8, &p);
        assert!((ps - 0.2).abs() < 1e-15 && (pf - 0.8).abs() < 1e-15);
        let [(_, ps), _] = transition_probabilities(&b(3.0, 9.0), true, 1.0 - 1e-9, &p);
        assert!(ps > 1.0 - 1e-8);
    }

    #[test]
    fn terminal_q_values_manipulate_low_trust() {
        let pr = problem(BehaviorModel::ReversePsychology, 0.9, vec![]);
        let q1 = q_value(&pr, 0, &b(50.0, 100.0), true, None).unwrap();
        let q0 = q_value(&pr, 0, &b(50.0, 100.0), false, None).unwrap();
        let hand1 = (1.0 / 3.0) * (0.9 * -61.0 + 0.1 * -50.0) + (2.0 / 3.0) * (0.9 * -110.0 + 0.1 * -6.0);
        let hand0 = (2.0 / 3.0) * (0.9 * -61.0 + 0.1 * -50.0) + (1.0 / 3.0) * (0.9 * -110.0 + 0.1 * -6.0);
        assert!((q1 - hand1).abs() < 1e-12);
        assert!((q0 - hand0).abs() < 1e-12);
        assert!((q1 + 86.367).abs() < 1e-3);
        assert!((q0 + 73.133).abs() < 1e-3);

        let sol = backward_induction(&pr, &Lattice::single(b(50.0, 100.0))).unwrap();
        assert!(!optimal_action(&sol, &b(50.0, 100.0)).unwrap());
    }

    #[test]
    fn neutral_trust_ties_break_toward_estimate() {
        for d in [0.2, 0.5, 0.9] {
            let pr = problem(BehaviorModel::ReversePsychology, d, vec![]);
            let q1 = q_value(&pr, 0, &b(30.0, 30.0), true, None).unwrap();
            let q0 = q_value(&pr, 0, &b(30.0, 30.0), false, None).unwrap();
            assert_eq!(q0, q1);
            let sol = backward_induction(&pr, &Lattice::single(b(30.0, 30.0))).unwrap();
            assert_eq!(optimal_action(&sol, &b(30.0, 30.0)).unwrap(), d >= 0.5);
        }
    }

    #[test]
    fn full_trust_recommends_gear() {
        for m in BehaviorModel::ALL {
            let pr = problem(m, 0.99, vec![]);
            let sol = backward_induction(&pr, &Lattice::single(b(1e6, 1.0))).unwrap();
            assert!(optimal_action(&sol, &b(1e6, 1.0)).unwrap());
        }
    }

    #[test]
    fn missing_successor_is_an_error() {
        let pr = problem(BehaviorModel::Disuse, 0.7, vec![0.4, 0.6]);
        let sol = backward_induction(&pr, &Lattice::single(b(100.0, 50.0))).unwrap();
        // (100, 50) has no successors on the step-1 grid of a solve anchored elsewhere
        let other = backward_induction(&pr, &Lattice::single(b(10.0, 10.0))).unwrap();
        assert!(matches!(
            q_value(&pr, 0, &b(100.0, 50.0), true, Some(&other.steps[1])),
            Err(Error::OffLattice { .. })
        ));
        assert!(q_value(&pr, 0, &b(100.0, 50.0), true, None).is_err());
        let direct = q_value(&pr, 0, &b(100.0, 50.0), true, Some(&sol.steps[1])).unwrap();
        assert!((direct - sol.first().cell(0, 0).unwrap().q[1]).abs() < 1e-12);
    }

    #[test]
    fn off_lattice_rejected() {
        let pr = problem(BehaviorModel::Disuse, 0.7, vec![0.4]);
        let sol = backward_induction(&pr, &Lattice::single(b(100.0, 50.0))).unwrap();
        assert!(optimal_action(&sol, &b(105.0, 50.0)).is_err());
        assert!(optimal_action(&sol, &b(110.0, 50.0)).is_err());
        assert!(sol.steps[1].lookup(&b(110.0, 50.0)).is_some());
        assert!(sol.steps[1].lookup(&b(110.0, 70.0)).is_none());
    }

    #[test]
    fn step_grids_cover_reachable_set() {
        let pr = problem(BehaviorModel::Disuse, 0.7, vec![0.4, 0.3, 0.8]);
        let lat = Lattice {
            alpha0: 10.0,
            beta0: 10.0,
            n_alpha: 3,
            n_beta: 2,
        };
        let sol = backward_induction(&pr, &lat).unwrap();
        assert_eq!(sol.steps.len(), 4);
        assert_eq!(sol.first().len(), 6);
        for (s, grid) in sol.steps.iter().enumerate() {
            assert_eq!(grid.site, pr.current_site + s);
            for (_, cell) in grid.iter() {
                assert!(cell.value.is_finite());
                assert_eq!(cell.value, cell.q[cell.recommend_wear as usize]);
            }
        }
    }

    #[test]
    fn invalid_problems_rejected() {
        let mut pr = problem(BehaviorModel::Disuse, 0.7, vec![]);
        pr.discount = 0.0;
        assert!(backward_induction(&pr, &Lattice::single(b(1.0, 1.0))).is_err());
        let pr = problem(BehaviorModel::Disuse, 1.0, vec![]);
        assert!(backward_induction(&pr, &Lattice::single(b(1.0, 1.0))).is_err());
        let mission: Vec<SiteTruth> = vec![];
        assert!(matches!(
            PlanningProblem::at_site(
                &mission,
                1,
                BehaviorModel::Disuse,
                RewardSpec::default(),
                TrustParams::default(),
                0.9
            ),
            Err(Error::ZeroHorizon)
        ));
    }
}
