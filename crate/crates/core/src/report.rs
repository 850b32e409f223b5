use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// JSON has no infinities: non-finite values are written as the strings
/// `"inf"`, `"-inf"` and `"nan"`, and read back from either form.
pub mod extended_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(serde::de::Error::custom(format!("'{t}' is not a number"))),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

/// One verified claim `lhs (≥|≤|=) rhs` up to `tolerance`. `slack` is the
/// margin by which it holds (negative when violated).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub relation: Relation,
    #[serde(with = "extended_f64")]
    pub lhs: f64,
    #[serde(with = "extended_f64")]
    pub rhs: f64,
    pub tolerance: f64,
    #[serde(with = "extended_f64")]
    pub slack: f64,
    pub pass: bool,
}

impl Check {
    /// Compares in the scalar's own arithmetic, so exact inputs give exact verdicts.
    pub fn compare<T: Scalar>(name: impl Into<String>, lhs: &T, relation: Relation, rhs: &T, tol: &T) -> Check {
        let slack = if lhs == rhs {
            T::zero()
        } else {
            match relation {
                Relation::Ge => lhs.clone() - rhs.clone(),
                Relation::Le => rhs.clone() - lhs.clone(),
                Relation::Eq => -(lhs.clone() - rhs.clone()).abs(),
            }
        };
        let pass = slack >= -tol.clone();
        Check {
            name: name.into(),
            relation,
            lhs: lhs.to_f64(),
            rhs: rhs.to_f64(),
            tolerance: tol.to_f64(),
            slack: slack.to_f64(),
            pass,
        }
    }

    pub fn ge(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Check {
        Check::compare(name, &lhs, Relation::Ge, &rhs, &tol)
    }

    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Check {
        Check::compare(name, &lhs, Relation::Le, &rhs, &tol)
    }

    pub fn eq(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Check {
        Check::compare(name, &lhs, Relation::Eq, &rhs, &tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Default for Report {
    fn default() -> Self {
        Report { checks: Vec::new(), pass: true }
    }
}

impl Report {
    pub fn new(checks: Vec<Check>) -> Report {
        let pass = checks.iter().all(|c| c.pass);
        Report { checks, pass }
    }

    pub fn push(&mut self, c: Check) {
        self.pass = self.pass && c.pass;
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        for c in other.checks {
            self.push(c);
        }
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn exact_comparison_has_no_slop() {
        let c = Check::compare("x", &rat(1, 3), Relation::Ge, &rat(1, 3), &rat(0, 1));
        assert!(c.pass);
        let c = Check::compare("x", &rat(1, 3), Relation::Eq, &rat(1, 2), &rat(0, 1));
        assert!(!c.pass);
        assert!(c.slack < 0.0);
    }

    #[test]
    fn report_tracks_failures() {
        let mut r = Report::default();
        r.push(Check::le("a", 1.0, 2.0, 0.0));
        assert!(r.pass);
        r.push(Check::ge("b", 1.0, 2.0, 0.5));
        assert!(!r.pass);
        assert_eq!(r.failed().count(), 1);
        assert!(r.to_json().contains("\"relation\": \"ge\""));
    }
}
