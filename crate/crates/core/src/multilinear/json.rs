use serde::{Deserialize, Serialize};

use super::form::KForm;
use crate::error::Error;

#[derive(Serialize, Deserialize)]
struct Term {
    idx: Vec<usize>,
    c: f64,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct FormRepr {
    degree: usize,
    terms: Vec<Term>,
}

impl From<KForm> for FormRepr {
    fn from(f: KForm) -> Self {
        FormRepr {
            degree: f.degree(),
            terms: f
                .terms()
                .into_iter()
                .map(|(idx, c)| Term { idx, c })
                .collect(),
        }
    }
}

impl TryFrom<FormRepr> for KForm {
    type Error = Error;

    fn try_from(r: FormRepr) -> Result<Self, Error> {
        let mut f = KForm::zero_checked(r.degree)?;
        for t in r.terms {
            if t.idx.len() != r.degree {
                return Err(Error::DegreeMismatch {
                    expected: r.degree,
                    found: t.idx.len(),
                });
            }
            if t.idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse {
                    input: format!("{:?}", t.idx),
                    reason: "indices must be strictly ascending".into(),
                });
            }
            f += KForm::monomial(t.c, &t.idx)?;
        }
        Ok(f)
    }
}

impl Serialize for KForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FormRepr::from(*self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for KForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = FormRepr::deserialize(d)?;
        KForm::try_from(r).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_schema_and_round_trip() {
        let f = KForm::monomial(1.5, &[1, 3]).unwrap() - KForm::monomial(1.0, &[2, 4]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(
            s,
            r#"{"degree":2,"terms":[{"idx":[1,3],"c":1.5},{"idx":[2,4],"c":-1.0}]}"#
        );
        let back: KForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let zero: KForm = serde_json::from_str(r#"{"degree":4,"terms":[]}"#).unwrap();
        assert_eq!(zero, KForm::zero(4));
    }

    #[test]
    fn json_rejects_malformed() {
        assert!(serde_json::from_str::<KForm>(r#"{"degree":7,"terms":[]}"#).is_err());
        assert!(
            serde_json::from_str::<KForm>(r#"{"degree":2,"terms":[{"idx":[2,1],"c":1}]}"#).is_err()
        );
        assert!(
            serde_json::from_str::<KForm>(r#"{"degree":2,"terms":[{"idx":[1],"c":1}]}"#).is_err()
        );
    }
}
