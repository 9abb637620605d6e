//! JSON documents and CSV writers for states, unitaries, distributions, and
//! class probabilities.
//!
//! State documents round-trip amplitudes at full double precision. Report
//! documents (distributions, class vectors, tables) pass every float through
//! [`canonical`] so golden files are stable across platforms.

use homsim_core::{
    ClassProbabilities, Complex, Ensemble, ModeAssignment, OutcomeDistribution, PureState,
    UnitaryMatrix,
};
use serde::{Deserialize, Serialize};

/// Rounds to 15 significant digits. Applied to all report output (not to
/// state documents, which must round-trip exactly).
pub fn canonical(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0; // normalize -0.0 as well
    }
    format!("{x:.14e}").parse().expect("float round-trip")
}

/// Shortest round-trip decimal form, identical to the JSON rendering.
pub fn fmt(x: f64) -> String {
    serde_json::to_string(&x).expect("float serialization")
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TermDoc {
    pub assignment: Vec<u8>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PureStateDoc {
    pub n: usize,
    pub d: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MemberDoc {
    pub weight: f64,
    pub state: PureStateDoc,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EnsembleDoc {
    pub members: Vec<MemberDoc>,
}

/// Either shape of state document, distinguished by its top-level key.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateDoc {
    Ensemble(EnsembleDoc),
    Pure(PureStateDoc),
}

impl From<&PureState> for PureStateDoc {
    fn from(psi: &PureState) -> Self {
        PureStateDoc {
            n: psi.particle_count(),
            d: psi.mode_count(),
            terms: psi
                .terms()
                .map(|(a, amp)| TermDoc {
                    assignment: a.modes().to_vec(),
                    re: amp.re,
                    im: amp.im,
                })
                .collect(),
        }
    }
}

impl From<&Ensemble> for EnsembleDoc {
    fn from(rho: &Ensemble) -> Self {
        EnsembleDoc {
            members: rho
                .members()
                .map(|(weight, state)| MemberDoc {
                    weight,
                    state: state.into(),
                })
                .collect(),
        }
    }
}

impl PureStateDoc {
    pub fn build(&self) -> Result<PureState, homsim_core::Error> {
        PureState::new(
            self.n,
            self.d,
            self.terms.iter().map(|t| {
                (
                    ModeAssignment::new(t.assignment.clone()),
                    Complex::new(t.re, t.im),
                )
            }),
        )
    }
}

impl EnsembleDoc {
    pub fn build(&self) -> Result<Ensemble, homsim_core::Error> {
        let members = self
            .members
            .iter()
            .map(|m| Ok((m.weight, m.state.build()?)))
            .collect::<Result<Vec<_>, homsim_core::Error>>()?;
        Ensemble::new(members)
    }
}

/// Row-major complex entries as `[re, im]` pairs.
#[derive(Debug, Serialize, Deserialize)]
pub struct UnitaryDoc {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl UnitaryDoc {
    pub fn build(&self) -> Result<UnitaryMatrix, homsim_core::Error> {
        UnitaryMatrix::new(
            self.dim,
            self.entries
                .iter()
                .map(|&[re, im]| Complex::new(re, im))
                .collect(),
        )
    }
}

impl From<&UnitaryMatrix> for UnitaryDoc {
    fn from(u: &UnitaryMatrix) -> Self {
        UnitaryDoc {
            dim: u.dim(),
            entries: u.entries().iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConfigProbDoc {
    pub counts: Vec<u8>,
    pub p: f64,
}

/// Lexicographically ordered configuration probabilities.
pub fn distribution_doc(dist: &OutcomeDistribution) -> Vec<ConfigProbDoc> {
    dist.iter()
        .map(|(config, p)| ConfigProbDoc {
            counts: config.counts().to_vec(),
            p: canonical(p),
        })
        .collect()
}

pub fn distribution_csv(dist: &OutcomeDistribution) -> String {
    let mut out = String::new();
    for i in 0..dist.ports() {
        out.push_str(&format!("a{i},"));
    }
    out.push_str("p\n");
    for (config, p) in dist.iter() {
        for &c in config.counts() {
            out.push_str(&format!("{c},"));
        }
        out.push_str(&fmt(canonical(p)));
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ClassProbDoc {
    pub n: usize,
    pub p: Vec<f64>,
}

pub fn class_doc(cp: &ClassProbabilities) -> ClassProbDoc {
    ClassProbDoc {
        n: cp.class_count(),
        p: cp.probabilities().iter().map(|&x| canonical(x)).collect(),
    }
}

pub fn class_csv(cp: &ClassProbabilities) -> String {
    let mut out = String::from("k,p\n");
    for (k, &p) in cp.probabilities().iter().enumerate() {
        out.push_str(&format!("{k},{}\n", fmt(canonical(p))));
    }
    out
}

pub fn state_csv(doc: &StateDoc) -> String {
    let mut out = String::from("member,weight,assignment,re,im\n");
    let push_pure = |out: &mut String, member: usize, weight: f64, state: &PureStateDoc| {
        for term in &state.terms {
            let assignment: String = term
                .assignment
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!(
                "{member},{},{assignment},{},{}\n",
                fmt(weight),
                fmt(term.re),
                fmt(term.im)
            ));
        }
    };
    match doc {
        StateDoc::Pure(state) => push_pure(&mut out, 0, 1.0, state),
        StateDoc::Ensemble(rho) => {
            for (i, m) in rho.members.iter().enumerate() {
                push_pure(&mut out, i, m.weight, &m.state);
            }
        }
    }
    out
}
