//! Table output. CSV uses 15 significant digits, '.' decimals and '\n' line
//! endings so identical runs give identical bytes.

use serde::Serialize;

/// `x` with 15 significant digits, trailing zeros removed. Plain notation
/// for decimal exponents in [−5, 15), scientific otherwise.
pub fn g15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Params {
    pub hbar: f64,
    pub omega: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    pub units: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelRow {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub epsilon: f64,
    pub energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
}

#[derive(Serialize)]
struct LevelsDoc<'a> {
    params: &'a Params,
    levels: &'a [LevelRow],
}

pub fn levels_csv(rows: &[LevelRow]) -> String {
    let with_k = rows.iter().any(|r| r.k.is_some());
    let label = if rows.iter().any(|r| r.region.is_some()) {
        "region"
    } else {
        "parity"
    };
    let mut out = String::new();
    out.push_str(if with_k { "n,k," } else { "n," });
    out.push_str(&format!("epsilon,energy,{label}\n"));
    for r in rows {
        out.push_str(&r.n.to_string());
        out.push(',');
        if let Some(k) = r.k {
            out.push_str(&format!("{k},"));
        }
        let tag = r.region.as_deref().or(r.parity.as_deref()).unwrap_or("");
        out.push_str(&format!("{},{},{tag}\n", g15(r.epsilon), g15(r.energy)));
    }
    out
}

pub fn levels_json(params: &Params, rows: &[LevelRow]) -> String {
    let mut s = serde_json::to_string_pretty(&LevelsDoc { params, levels: rows }).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SweepRow<'a> {
    b: f64,
    energies: &'a [f64],
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    params: &'a Params,
    rows: Vec<SweepRow<'a>>,
}

pub fn sweep_csv(b: &[f64], energies: &[Vec<f64>]) -> String {
    let levels = energies.first().map_or(0, Vec::len);
    let mut out = String::from("b");
    for n in 0..levels {
        out.push_str(&format!(",E_{n}"));
    }
    out.push('\n');
    for (bi, row) in b.iter().zip(energies) {
        out.push_str(&g15(*bi));
        for e in row {
            out.push(',');
            out.push_str(&g15(*e));
        }
        out.push('\n');
    }
    out
}

pub fn sweep_json(params: &Params, b: &[f64], energies: &[Vec<f64>]) -> String {
    let rows = b
        .iter()
        .zip(energies)
        .map(|(&b, e)| SweepRow { b, energies: e })
        .collect();
    let mut s = serde_json::to_string_pretty(&SweepDoc { params, rows }).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Sample {
    z: f64,
    psi: f64,
}

#[derive(Serialize)]
struct SamplesDoc<'a> {
    params: &'a Params,
    n: usize,
    samples: Vec<Sample>,
}

pub fn samples_csv(samples: &[(f64, f64)]) -> String {
    let mut out = String::from("z,psi\n");
    for &(z, psi) in samples {
        out.push_str(&format!("{},{}\n", g15(z), g15(psi)));
    }
    out
}

pub fn samples_json(params: &Params, n: usize, samples: &[(f64, f64)]) -> String {
    let samples = samples.iter().map(|&(z, psi)| Sample { z, psi }).collect();
    let mut s = serde_json::to_string_pretty(&SamplesDoc { params, n, samples }).expect("serializable");
    s.push('\n');
    s
}
