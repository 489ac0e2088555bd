//! CSV run logs: `trial,X,Y,A,B,C,D,lambda_tag`, outcomes as `1`/`-1`,
//! undefined friend results as empty fields.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{HiddenState, Outcome, RunRecord};

#[derive(Serialize, Deserialize)]
struct Row {
    trial: u64,
    #[serde(rename = "X")]
    x: u8,
    #[serde(rename = "Y")]
    y: u8,
    #[serde(rename = "A")]
    a: i8,
    #[serde(rename = "B")]
    b: i8,
    #[serde(rename = "C")]
    c: Option<i8>,
    #[serde(rename = "D")]
    d: Option<i8>,
    lambda_tag: String,
}

fn log_err(e: impl std::fmt::Display) -> Error {
    Error::Log(e.to_string())
}

pub fn write_log<W: Write>(writer: W, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(Row {
            trial: r.trial,
            x: r.x,
            y: r.y,
            a: r.a.value(),
            b: r.b.value(),
            c: r.c.map(Outcome::value),
            d: r.d.map(Outcome::value),
            lambda_tag: r.lambda.tag(),
        })
        .map_err(log_err)?;
    }
    w.flush().map_err(log_err)
}

pub fn read_log<R: Read>(reader: R) -> Result<Vec<RunRecord>> {
    let outcome = |v: i8| Outcome::from_value(v).ok_or_else(|| Error::Log(format!("outcome {v} is not ±1")));
    csv::Reader::from_reader(reader)
        .deserialize::<Row>()
        .map(|row| {
            let row = row.map_err(log_err)?;
            Ok(RunRecord {
                trial: row.trial,
                x: row.x,
                y: row.y,
                a: outcome(row.a)?,
                b: outcome(row.b)?,
                c: row.c.map(outcome).transpose()?,
                d: row.d.map(outcome).transpose()?,
                lambda: HiddenState::parse_tag(&row.lambda_tag)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ToyHiddenState;

    #[test]
    fn round_trip() {
        let recs = vec![
            RunRecord {
                trial: 0,
                x: 1,
                y: 2,
                a: Outcome::Plus,
                b: Outcome::Minus,
                c: Some(Outcome::Plus),
                d: None,
                lambda: HiddenState::Theta(ToyHiddenState { theta1: 0.1, theta2: 2.5 }),
            },
            RunRecord {
                trial: 1,
                x: 2,
                y: 1,
                a: Outcome::Minus,
                b: Outcome::Minus,
                c: None,
                d: None,
                lambda: HiddenState::None,
            },
        ];
        let mut buf = Vec::new();
        write_log(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), "trial,X,Y,A,B,C,D,lambda_tag");
        assert_eq!(text.lines().nth(2).unwrap(), "1,2,1,-1,-1,,,");
        assert_eq!(read_log(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn rejects_bad_outcome() {
        let text = "trial,X,Y,A,B,C,D,lambda_tag\n0,1,1,2,1,,,\n";
        assert!(matches!(read_log(text.as_bytes()), Err(Error::Log(_))));
    }
}
