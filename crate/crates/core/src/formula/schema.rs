use super::{parse, Formula};
use std::collections::BTreeMap;

/// An axiom scheme over the placeholders `A`, `B`, `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: &'static str,
    pub text: &'static str,
}

const PLACEHOLDERS: [&str; 3] = ["A", "B", "C"];

const TABLE: [(&str, &str); 16] = [
    ("L1", "[](A -> B) -> []A -> []B"),
    ("L2", "[]A -> [][]A"),
    ("L3", "[]([]A -> A) -> []A"),
    ("J1", "[](A -> B) -> A |> B"),
    ("J2", "(A |> B) /\\ (B |> C) -> A |> C"),
    ("J3", "(A |> C) /\\ (B |> C) -> A \\/ B |> C"),
    ("J4", "A |> B -> <>A -> <>B"),
    ("J5", "<>A |> A"),
    ("M", "A |> B -> A /\\ []C |> B /\\ []C"),
    ("P", "A |> B -> [](A |> B)"),
    ("M0", "A |> B -> <>A /\\ []C |> B /\\ []C"),
    ("W", "A |> B -> A |> B /\\ []~A"),
    ("W*", "A |> B -> B /\\ []C |> B /\\ []C /\\ []~A"),
    ("P0", "A |> <>B -> [](A |> B)"),
    ("R", "A |> B -> ~(A |> ~C) |> B /\\ []C"),
    ("M0*", "A |> B -> <>A /\\ []C |> B /\\ []C /\\ []~A"),
];

/// Equivalences that hold on every IL-frame.
pub const LEMMA_BATTERY: [&str; 3] = ["[]p <-> ~p |> bot", "p |> p /\\ []~p", "p \\/ <>p |> p"];

impl Schema {
    /// The scheme with placeholders as variables `A`, `B`, `C`.
    pub fn body(&self) -> Formula {
        parse(self.text).expect("built-in schema parses")
    }

    /// Placeholders that occur in the scheme.
    pub fn placeholders(&self) -> Vec<&'static str> {
        let vars = self.body().variables();
        PLACEHOLDERS
            .iter()
            .copied()
            .filter(|p| vars.contains(*p))
            .collect()
    }

    /// Substitute formulas for placeholders; missing ones default to `bot`.
    pub fn instantiate(&self, subst: &BTreeMap<&str, Formula>) -> Formula {
        self.body().substitute(&|name| {
            if PLACEHOLDERS.contains(&name) {
                Some(subst.get(name).cloned().unwrap_or(Formula::Bot))
            } else {
                None
            }
        })
    }

    /// Positional form of [`Schema::instantiate`]: `A`, `B`, `C` in order.
    pub fn instance(&self, args: &[Formula]) -> Formula {
        let subst = PLACEHOLDERS
            .iter()
            .copied()
            .zip(args.iter().cloned())
            .collect();
        self.instantiate(&subst)
    }
}

pub fn schemas() -> Vec<Schema> {
    TABLE
        .iter()
        .map(|(name, text)| Schema { name, text })
        .collect()
}

pub fn schema(name: &str) -> Option<Schema> {
    schemas().into_iter().find(|s| s.name == name)
}
