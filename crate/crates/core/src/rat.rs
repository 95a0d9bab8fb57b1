//! Exact rationals and their JSON shape `{"num": n, "den": d}`.

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rat = Ratio<i128>;

pub fn rat(n: i128, d: i128) -> Rat {
    Ratio::new(n, d)
}

pub fn int(n: i64) -> Rat {
    Ratio::from_integer(n as i128)
}

pub fn to_f64(r: &Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Serialize, Deserialize)]
struct RatJson {
    num: i128,
    den: i128,
}

pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    RatJson {
        num: *r.numer(),
        den: *r.denom(),
    }
    .serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
    let j = RatJson::deserialize(d)?;
    if j.den == 0 {
        return Err(serde::de::Error::custom("zero denominator"));
    }
    Ok(Ratio::new(j.num, j.den))
}

pub fn to_json(r: &Rat) -> serde_json::Value {
    serde_json::json!({"num": *r.numer(), "den": *r.denom()})
}
