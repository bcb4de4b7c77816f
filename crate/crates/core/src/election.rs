//! The game read as a two-phase election.
//!
//! Phase one eliminates a candidate (the cutter's rejection), phase two picks
//! a winner from the remaining pair (the chooser). The phase-two winner is
//! the chooser's meal and the phase-two loser is the cutter's meal.

use serde::{Deserialize, Serialize};

use crate::diet::diet_profile;
use crate::error::{Error, Result};
use crate::strategy::{classify_preferences, ChooserStrategy, CutterStrategy, PreferenceClass};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElectionReport {
    pub labels: [String; 3],
    pub phase1_elimination_dist: [f64; 3],
    pub phase2_winner_dist: [f64; 3],
    pub phase2_loser_dist: [f64; 3],
    pub preference_class_of_electorate: PreferenceClass,
    /// The class spelled out with candidate labels.
    pub preference_summary: String,
}

pub fn to_election_report(
    cutter: &CutterStrategy,
    chooser: &ChooserStrategy,
    labels: [&str; 3],
) -> Result<ElectionReport> {
    for (i, label) in labels.iter().enumerate() {
        if label.is_empty() {
            return Err(Error::EmptyLabel);
        }
        if labels[..i].contains(label) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
    }
    let profile = diet_profile(cutter, chooser);
    let (_, class) = classify_preferences(chooser, 0.0)?;
    Ok(ElectionReport {
        labels: labels.map(str::to_string),
        phase1_elimination_dist: cutter.probabilities(),
        phase2_winner_dist: profile.omega,
        phase2_loser_dist: profile.lambda,
        preference_class_of_electorate: class,
        preference_summary: summarize(&class, &labels),
    })
}

fn summarize(class: &PreferenceClass, labels: &[&str; 3]) -> String {
    let [a, b, c] = labels;
    match class {
        PreferenceClass::TransitiveStrict { order } => format!(
            "transitive: {} > {} > {}",
            labels[order[0].index()],
            labels[order[1].index()],
            labels[order[2].index()]
        ),
        PreferenceClass::IntransitiveCycleCondition1 => {
            format!("intransitive cycle: {b} > {a}, {c} > {b}, {a} > {c}")
        }
        PreferenceClass::IntransitiveCycleCondition2 => {
            format!("intransitive cycle: {a} > {b}, {b} > {c}, {c} > {a}")
        }
        PreferenceClass::IntransitiveIndifference => "intransitive indifference".to_string(),
        PreferenceClass::PartiallyTied => "partially tied".to_string(),
    }
}
