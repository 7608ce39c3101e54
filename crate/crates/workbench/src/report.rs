//! Deterministic analysis reports. Every real is rounded to 12 significant
//! digits so that identical sessions serialize to identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use sd_core::formats::{round_real, weights_to_json};
use sd_core::group::{additivity_check, copeland, group_level, group_sd, majority, tally};
use sd_core::interval::{
    abstention_tally, group_intervals, interval_order, missing_info, IntervalEstimate,
};
use sd_core::levels::{ladder, level_relation};
use sd_core::superiority::{ClassFlags, EPS};
use sd_core::{PreferenceRelation, SdMatrix, UtilityVector, WeightVector};

use crate::data::Data;
use crate::error::{Error, Result};
use crate::session::{suggest_next_pair, Session};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scored {
    pub id: String,
    pub value: f64,
}

/// One rung of a ladder, or the level relation at an arbitrary level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RungView {
    pub level: f64,
    pub core: Vec<String>,
    pub strict_pairs: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderView {
    pub level_star: f64,
    pub rungs: Vec<RungView>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorityView {
    pub strict_pairs: Vec<[String; 2]>,
    /// Unordered tied pairs, each listed once.
    pub ties: Vec<[String; 2]>,
    pub transitive: bool,
    pub core: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelView {
    pub experts: usize,
    /// Vote counts `n_ij`, rows in alternative order.
    pub tally: Vec<Vec<f64>>,
    pub majority: MajorityView,
    pub copeland: Vec<Scored>,
    pub copeland_ranking: Vec<Vec<String>>,
    /// Net-vote matrix satisfies the additive identity.
    pub additive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub id: String,
    pub lower: f64,
    pub upper: f64,
    pub missing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingView {
    pub mean: f64,
    pub max: f64,
    pub sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalView {
    pub phi_star: f64,
    pub intervals: Vec<Interval>,
    pub missing: MissingView,
    /// Strict interval dominance.
    pub order: Vec<[String; 2]>,
    pub core: Vec<String>,
    /// Integral bounds `U(x, y)`, rows in alternative order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_bounds: Option<Vec<Vec<f64>>>,
    /// Integral bounds `D(x, y)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bounds: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suggestion: Option<[String; 2]>,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionView {
    pub name: String,
    pub weight: f64,
    pub classes: ClassFlags,
    pub utilities: Vec<Scored>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub session: String,
    pub kind: String,
    pub alternatives: Vec<String>,
    pub weights: BTreeMap<String, f64>,
    pub selected_level: Option<f64>,
    pub bookmarks: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<ClassFlags>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub utilities: Option<Vec<Scored>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<LadderView>,
    /// Level relation at the selected level (or 0).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection: Option<RungView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub panel: Option<PanelView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intervals: Option<IntervalView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criteria: Option<Vec<CriterionView>>,
    pub warnings: Vec<String>,
}

fn pairs(r: &PreferenceRelation) -> Vec<[String; 2]> {
    r.id_pairs().into_iter().map(|(x, y)| [x, y]).collect()
}

fn scored(u: &UtilityVector) -> Vec<Scored> {
    u.base()
        .ids()
        .iter()
        .zip(u.values())
        .map(|(id, &v)| Scored {
            id: id.clone(),
            value: round_real(v),
        })
        .collect()
}

fn rows(rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    rows.into_iter()
        .map(|r| r.into_iter().map(round_real).collect())
        .collect()
}

fn rung(level: f64, relation: &PreferenceRelation) -> RungView {
    RungView {
        level: round_real(level),
        core: relation.core().ids(),
        strict_pairs: pairs(&relation.strict_part()),
    }
}

/// Rungs of the ladder over `m`.
pub fn ladder_view(m: &SdMatrix, w: &WeightVector) -> Result<LadderView> {
    let chain = ladder(m, w)?;
    Ok(LadderView {
        level_star: round_real(chain.level_star()),
        rungs: chain
            .rungs()
            .iter()
            .map(|r| rung(r.level, &r.relation))
            .collect(),
    })
}

/// The level relation of `m` at exactly `level`.
pub fn level_view(m: &SdMatrix, level: f64) -> Result<RungView> {
    Ok(rung(level, &level_relation(m, level)?))
}

fn interval_view(est: &IntervalEstimate, w: &WeightVector) -> Result<IntervalView> {
    let info = missing_info(est, w)?;
    let order = interval_order(est);
    Ok(IntervalView {
        phi_star: round_real(est.phi_star()),
        intervals: est
            .base()
            .ids()
            .iter()
            .enumerate()
            .map(|(x, id)| Interval {
                id: id.clone(),
                lower: round_real(est.lower()[x]),
                upper: round_real(est.upper()[x]),
                missing: round_real(est.missing_mass()[x]),
            })
            .collect(),
        missing: MissingView {
            mean: round_real(info.mean),
            max: round_real(info.max),
            sum: round_real(info.sum),
        },
        core: order.core().ids(),
        order: pairs(&order),
        upper_bounds: None,
        lower_bounds: None,
        suggestion: None,
        complete: est.missing_mass().iter().all(|&m| m == 0.0),
    })
}

fn panel_view(t: &sd_core::group::TallyMatrix) -> PanelView {
    let m = majority(t);
    let n = t.base().len();
    let ties = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| m.contains(i, j) && m.contains(j, i))
        .map(|(i, j)| [t.base().id(i).to_string(), t.base().id(j).to_string()])
        .collect();
    let c = copeland(t);
    PanelView {
        experts: t.experts(),
        tally: rows(t.rows()),
        majority: MajorityView {
            strict_pairs: pairs(&m.strict_part()),
            ties,
            transitive: m.is_transitive(),
            core: m.core().ids(),
        },
        copeland_ranking: c.scores.ranking(EPS),
        copeland: scored(&c.scores),
        additive: additivity_check(&group_sd(t), EPS),
    }
}

/// Full analysis of the session's current state.
pub fn analyze(session: &Session) -> Result<Report> {
    let state = session.state();
    let data = &state.data;
    let w = session.weights();
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        session: session.id().to_string(),
        kind: data.kind().name().to_string(),
        alternatives: data.base().ids().to_vec(),
        weights: weights_to_json(w),
        selected_level: state.selected_level,
        bookmarks: state.bookmarks.clone(),
        classes: None,
        utilities: None,
        ranking: None,
        ladder: None,
        selection: None,
        panel: None,
        intervals: None,
        criteria: None,
        warnings: Vec::new(),
    };
    let level = state.selected_level.unwrap_or(0.0);
    match data {
        Data::Matrix(m) => {
            let flags = m.classify(EPS);
            if !flags.in_t {
                report
                    .warnings
                    .push("matrix is not additively transitive; utilities come from its ISD".into());
            }
            let q = m.utility(w)?;
            report.classes = Some(flags);
            report.ranking = Some(q.ranking(EPS));
            report.utilities = Some(scored(&q));
        }
        Data::Criteria { family, names } => {
            let conv = family.convolution(w)?;
            report.classes = Some(family.aggregate().classify(EPS));
            report.ranking = Some(conv.total.ranking(EPS));
            report.utilities = Some(scored(&conv.total));
            report.criteria = Some(
                family
                    .criteria()
                    .iter()
                    .zip(family.weights())
                    .zip(names)
                    .zip(&conv.per_criterion)
                    .map(|(((m, &weight), name), u)| CriterionView {
                        name: name.clone(),
                        weight: round_real(weight),
                        classes: m.classify(EPS),
                        utilities: scored(u),
                    })
                    .collect(),
            );
        }
        Data::Panel(vpr) => {
            let t = tally(vpr)?;
            let panel = panel_view(&t);
            if !panel.majority.transitive {
                report
                    .warnings
                    .push("majority relation contains a cycle".into());
            }
            report.classes = Some(group_sd(&t).classify(EPS));
            report.ranking = Some(panel.copeland_ranking.clone());
            report.utilities = Some(panel.copeland.clone());
            report.panel = Some(panel);
            let g = group_level(&t, level)?;
            report.selection = Some(rung(level, &g.relation));
        }
        Data::Partial(p) => {
            let est = p.interval_utilities(w)?;
            let bounds = p.integral_bounds(w)?;
            let mut view = interval_view(&est, w)?;
            view.upper_bounds = Some(rows(bounds.upper_rows()));
            view.lower_bounds = Some(rows(bounds.lower_rows()));
            view.suggestion = suggest_next_pair(session)?.map(|(x, y)| [x, y]);
            report.intervals = Some(view);
        }
        Data::Abstentions(vpr) => {
            let t = abstention_tally(vpr);
            let est = group_intervals(&t, w)?;
            report.classes = Some(t.degree_matrix().classify(EPS));
            report.intervals = Some(interval_view(&est, w)?);
            report
                .warnings
                .push("panel has abstentions; utilities are reported as intervals".into());
        }
    }
    let source = match data.ladder_source() {
        Ok(m) => m,
        Err(Error::WrongKind { .. }) => return Ok(report),
        Err(e) => return Err(e),
    };
    report.ladder = Some(ladder_view(&source, w)?);
    if report.selection.is_none() {
        report.selection = Some(level_view(&source, level)?);
    }
    if let Data::Partial(_) = data {
        // Fully elicited: the point utilities are now known.
        let q = source.utility(w)?;
        report.classes = Some(source.classify(EPS));
        report.ranking = Some(q.ranking(EPS));
        report.utilities = Some(scored(&q));
    }
    Ok(report)
}

pub fn to_json(report: &Report) -> String {
    crate::data::pretty(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::Session;
    use sd_core::fixtures;

    fn session(data: Data) -> Session {
        Session::with_id("t", data, None).unwrap()
    }

    fn near(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn transitive_matrix_report() {
        let r = analyze(&session(Data::Matrix(fixtures::fix_t()))).unwrap();
        let u: Vec<f64> = r.utilities.unwrap().iter().map(|s| s.value).collect();
        for (got, want) in u.iter().zip([5.0 / 3.0, -1.0 / 3.0, -4.0 / 3.0]) {
            assert!(near(*got, want), "{got} vs {want}");
        }
        let ladder = r.ladder.unwrap();
        assert_eq!(ladder.rungs.len(), 4);
        assert_eq!(ladder.level_star, 3.0);
        let levels: Vec<f64> = ladder.rungs.iter().map(|r| r.level).collect();
        assert_eq!(levels, [0.0, 1.0, 2.0, 3.0]);
        assert_eq!(ladder.rungs[0].core, ["a"]);
        assert_eq!(ladder.rungs[3].core, ["a", "b"]);
        assert!(r.classes.unwrap().in_t);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn condorcet_report() {
        let r = analyze(&session(Data::Panel(fixtures::fix_condorcet()))).unwrap();
        assert!(r.warnings.iter().any(|w| w.contains("cycle")));
        let panel = r.panel.unwrap();
        assert!(!panel.majority.transitive);
        assert!(panel.majority.core.is_empty());
        assert_eq!(panel.copeland_ranking, vec![vec!["a", "b", "c"]]);
        assert!(panel.copeland.iter().all(|s| s.value == 0.0));
        assert_eq!(r.selection.unwrap().core, ["a", "b", "c"]);
        let ladder = r.ladder.unwrap();
        assert_eq!(ladder.rungs.len(), 1);
        assert_eq!(ladder.rungs[0].core, ["a", "b", "c"]);
    }

    #[test]
    fn group_report() {
        let r = analyze(&session(Data::Panel(fixtures::fix_grp()))).unwrap();
        let panel = r.panel.unwrap();
        let scores: Vec<f64> = panel.copeland.iter().map(|s| s.value).collect();
        assert_eq!(scores, [4.0, 0.0, -4.0]);
        assert_eq!(r.ranking.unwrap(), vec![vec!["a"], vec!["b"], vec!["c"]]);
        assert_eq!(panel.tally[0], [1.5, 2.0, 3.0]);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn partial_report() {
        let r = analyze(&session(Data::Partial(fixtures::fix_part()))).unwrap();
        let iv = r.intervals.unwrap();
        assert!(near(iv.missing.mean, 4.0 / 9.0));
        assert!(near(iv.missing.max, 2.0 / 3.0));
        assert!(near(iv.missing.sum, 1.0));
        assert!(near(iv.intervals[0].upper, 2.0 / 3.0));
        assert!(near(iv.upper_bounds.unwrap()[0][1], 4.0 / 3.0));
        assert_eq!(iv.suggestion, Some(["a".to_string(), "c".to_string()]));
        assert!(!iv.complete);
        assert!(r.ladder.is_none());
    }

    #[test]
    fn completed_partial_report_gains_utilities() {
        let mut s = session(Data::Partial(fixtures::fix_part()));
        s.refine("a", "c", 1.0).unwrap();
        s.refine("b", "c", 0.0).unwrap();
        let r = analyze(&s).unwrap();
        assert!(r.intervals.as_ref().unwrap().complete);
        assert!(r.utilities.is_some());
        assert!(r.ladder.is_some());
    }

    #[test]
    fn criteria_report() {
        let family = sd_core::superiority::CriterionFamily::new(
            vec![fixtures::fix_t(), fixtures::fix_cycle()],
            vec![0.5, 0.5],
        )
        .unwrap();
        let data = Data::Criteria {
            family,
            names: vec!["cost".into(), "risk".into()],
        };
        let r = analyze(&session(data)).unwrap();
        let crit = r.criteria.unwrap();
        assert_eq!(crit.len(), 2);
        assert!(crit[0].classes.in_t && !crit[1].classes.in_t);
        let total: Vec<f64> = r.utilities.unwrap().iter().map(|s| s.value).collect();
        assert!(near(total[0], 5.0 / 6.0));
    }

    #[test]
    fn abstention_report() {
        use sd_core::group::{Ballot, PairVerdict, Verdict, VectorPreferenceRelation};
        let base = sd_core::AlternativeSet::new(["a", "b"]).unwrap();
        let abstain = |id: &str| {
            Ballot::pairs(
                id,
                vec![PairVerdict {
                    x: "a".into(),
                    y: "b".into(),
                    verdict: Verdict::Abstain,
                }],
            )
        };
        let vpr = VectorPreferenceRelation::from_ballots(&base, &[abstain("E1")]).unwrap();
        let r = analyze(&session(Data::from_panel(vpr))).unwrap();
        let iv = r.intervals.unwrap();
        assert_eq!((iv.intervals[0].lower, iv.intervals[0].upper), (-0.5, 0.5));
        assert!(r.ladder.is_none());
    }

    #[test]
    fn reports_are_deterministic() {
        let s = session(Data::Panel(fixtures::fix_grp()));
        assert_eq!(to_json(&analyze(&s).unwrap()), to_json(&analyze(&s.clone()).unwrap()));
    }
}
