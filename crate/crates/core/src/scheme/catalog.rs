use super::{derive_prefactored, PrefactoredScheme, SchemeSpec};

/// Published weight table: label, nominal order, alpha_1..2, a_1..3.
///
/// Nominal orders for the optimised entries are the orders their printed
/// weights actually satisfy (DRP and Lele 4, Lui 6, Haras 2).
const TABLE: &[(&str, u32, [&str; 2], [&str; 3])] = &[
    ("E2", 2, ["0", "0"], ["1/2", "0", "0"]),
    ("E4", 4, ["0", "0"], ["2/3", "-1/12", "0"]),
    ("E6", 6, ["0", "0"], ["3/4", "-3/20", "1/60"]),
    ("DRP", 4, ["0", "0"], ["0.770882380", "-0.166705904", "0.020843142"]),
    ("C4", 4, ["1/4", "0"], ["3/4", "0", "0"]),
    ("Haras", 2, ["0.3534620", "0"], ["1.5669657/2", "0.13995831/4", "0"]),
    ("Lui", 6, ["0.5381301", "0.0666331"], ["1.36757772/2", "0.823428170/4", "0.0185207834/6"]),
    ("Lele", 4, ["0.5771439", "0.0896406"], ["1.3025166/2", "0.99355/4", "0.03750245/6"]),
];

#[derive(Debug, Clone)]
pub struct Catalog {
    pub schemes: Vec<SchemeSpec>,
    pub prefactored: Vec<PrefactoredScheme>,
}

impl Catalog {
    pub fn scheme(&self, label: &str) -> Option<&SchemeSpec> {
        self.schemes.iter().find(|s| s.label.eq_ignore_ascii_case(label))
    }

    pub fn prefactored(&self, label: &str) -> Option<&PrefactoredScheme> {
        self.prefactored.iter().find(|s| s.label.eq_ignore_ascii_case(label))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.schemes
            .iter()
            .map(|s| s.label.as_str())
            .chain(self.prefactored.iter().map(|p| p.label.as_str()))
    }
}

pub fn builtin_catalog() -> Catalog {
    let schemes = TABLE
        .iter()
        .map(|(label, order, alpha, a)| {
            SchemeSpec::from_text(label, alpha, a, *order).expect("built-in table is well formed")
        })
        .collect();
    let prefactored = [4, 6]
        .into_iter()
        .map(|order| derive_prefactored(order).expect("orders 4 and 6 are feasible"))
        .collect();
    Catalog { schemes, prefactored }
}
