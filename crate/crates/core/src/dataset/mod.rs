//! Defect classes, the synthetic fabric corpus, split planning and the
//! repeated train/test protocol.

mod generate;
pub mod io;
mod protocol;
mod split;

pub use generate::{
    generate_corpus, generate_image, nominal_contrast, CorpusSpec, LabeledImage, MIN_CONTRAST,
};
pub use io::{extract_features, LabeledFeatures};
pub(crate) use protocol::run_rounds as protocol_rounds;
pub use protocol::{modal_choice, repeated_train_eval, ProtocolResult, RoundOutcome};
pub use split::{make_split, split_sizes, SplitPlan, TRAIN_FRACTION};

use crate::error::{Error, Result};

/// Defect classes in output-unit order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DefectClass {
    ColorYarn,
    VerticalMissingYarn,
    HorizontalMissingYarn,
    Hole,
    Spot,
    DefectFree,
}

impl DefectClass {
    pub const ALL: [DefectClass; 6] = [
        DefectClass::ColorYarn,
        DefectClass::VerticalMissingYarn,
        DefectClass::HorizontalMissingYarn,
        DefectClass::Hole,
        DefectClass::Spot,
        DefectClass::DefectFree,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            DefectClass::ColorYarn => "Color Yarn",
            DefectClass::VerticalMissingYarn => "Vertical Missing Yarn",
            DefectClass::HorizontalMissingYarn => "Horizontal Missing Yarn",
            DefectClass::Hole => "Hole",
            DefectClass::Spot => "Spot",
            DefectClass::DefectFree => "Defect-Free",
        }
    }

    pub fn is_defect(self) -> bool {
        self != DefectClass::DefectFree
    }
}

impl std::fmt::Display for DefectClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DefectClass {
    type Err = Error;

    /// Accepts the display name, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        DefectClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown defect class {s:?}")))
    }
}
