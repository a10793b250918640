//! Model save/load in a self-describing flat key-value text format. Floats
//! are written in shortest round-trip form, so reloaded models predict
//! bit-identically.

use crate::error::{Error, Result};
use crate::victims::{
    gaussian_nb::NbParams, logreg::LrParams, lssvm::LssvmParams, svm::SvmParams, Family,
    FittedModel, Kernel, KernelKind, Matrix, ModelParams, VictimSpec,
};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

fn fmt_vec(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn fmt_usize_vec(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_matrix(out: &mut String, prefix: &str, m: &Matrix) {
    for i in 0..m.rows {
        out.push_str(&format!("{prefix}.{i} = {}\n", fmt_vec(m.row(i))));
    }
}

pub fn save_model(model: &FittedModel, path: &Path) -> Result<()> {
    let mut s = String::new();
    s.push_str(&format!("family = {}\n", model.spec.family.as_str()));
    s.push_str(&format!("label = {}\n", model.spec.label()));
    s.push_str(&format!("input_dim = {}\n", model.input_dim));
    s.push_str(&format!("warning = {}\n", model.convergence_warning));
    s.push_str(&format!("c = {}\n", model.spec.c));
    s.push_str(&format!("tol = {}\n", model.spec.tol));
    if let Some(mask) = &model.mask {
        s.push_str(&format!("mask = {}\n", fmt_usize_vec(mask)));
    }
    match &model.params {
        ModelParams::GaussianNb(p) => {
            s.push_str(&format!("ln_prior = {}\n", fmt_vec(&p.ln_prior)));
            s.push_str(&format!("mean.normal = {}\n", fmt_vec(&p.mean[0])));
            s.push_str(&format!("mean.abnormal = {}\n", fmt_vec(&p.mean[1])));
            s.push_str(&format!("var.normal = {}\n", fmt_vec(&p.var[0])));
            s.push_str(&format!("var.abnormal = {}\n", fmt_vec(&p.var[1])));
        }
        ModelParams::LogReg(p) => {
            s.push_str(&format!("w = {}\n", fmt_vec(&p.w)));
            s.push_str(&format!("b = {}\n", p.b));
        }
        ModelParams::Svm(p) => {
            s.push_str(&format!("kernel = {}\n", p.kernel.kind.as_str()));
            s.push_str(&format!("gamma = {}\n", p.kernel.gamma));
            s.push_str(&format!("coef0 = {}\n", p.kernel.coef0));
            s.push_str(&format!("degree = {}\n", p.kernel.degree));
            s.push_str(&format!("bias = {}\n", p.bias));
            s.push_str(&format!("coef = {}\n", fmt_vec(&p.coef)));
            s.push_str(&format!("sv_indices = {}\n", fmt_usize_vec(&p.sv_indices)));
            write_matrix(&mut s, "sv", &p.sv);
        }
        ModelParams::Lssvm(p) => {
            s.push_str(&format!("kernel = {}\n", p.kernel.kind.as_str()));
            s.push_str(&format!("gamma = {}\n", p.kernel.gamma));
            s.push_str(&format!("coef0 = {}\n", p.kernel.coef0));
            s.push_str(&format!("degree = {}\n", p.kernel.degree));
            s.push_str(&format!("bias = {}\n", p.bias));
            s.push_str(&format!("ls_gamma = {}\n", model.spec.ls_gamma));
            s.push_str(&format!("alpha = {}\n", fmt_vec(&p.alpha)));
            write_matrix(&mut s, "x", &p.x);
        }
    }
    let mut f = std::io::BufWriter::new(
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?,
    );
    f.write_all(s.as_bytes())
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(())
}

struct KvFile {
    map: BTreeMap<String, String>,
}

impl KvFile {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("expected `key = value`, got {line:?}"),
            })?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(KvFile { map })
    }

    fn get(&self, key: &str) -> Result<&str> {
        self.map
            .get(key)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::Config(format!("model file is missing key {key:?}")))
    }

    fn f64(&self, key: &str) -> Result<f64> {
        self.get(key)?
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("model key {key:?} is not a number")))
    }

    fn vec_f64(&self, key: &str) -> Result<Vec<f64>> {
        self.get(key)?
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad float in {key:?}")))
            })
            .collect()
    }

    fn vec_usize(&self, key: &str) -> Result<Vec<usize>> {
        self.get(key)?
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Config(format!("bad index in {key:?}")))
            })
            .collect()
    }

    fn matrix(&self, prefix: &str, cols: usize) -> Result<Matrix> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        loop {
            let key = format!("{prefix}.{}", rows.len());
            if !self.map.contains_key(&key) {
                break;
            }
            rows.push(self.vec_f64(&key)?);
        }
        for r in &rows {
            if r.len() != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    got: r.len(),
                });
            }
        }
        Ok(Matrix::from_rows(rows.iter().map(|r| r.as_slice()), cols))
    }

    fn kernel(&self) -> Result<Kernel> {
        let kind = KernelKind::parse(self.get("kernel")?)
            .ok_or_else(|| Error::Config("unknown kernel kind".into()))?;
        Ok(Kernel {
            kind,
            gamma: self.f64("gamma")?,
            coef0: self.f64("coef0")?,
            degree: self.f64("degree")? as u32,
        })
    }
}

pub fn load_model(path: &Path) -> Result<FittedModel> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let kv = KvFile::parse(&text)?;
    let family = match kv.get("family")? {
        "gaussian-nb" => Family::GaussianNb,
        "logreg" => Family::LogReg,
        "svm" => Family::Svm,
        "lssvm" => Family::Lssvm,
        other => return Err(Error::Config(format!("unknown family {other:?}"))),
    };
    let input_dim = kv.f64("input_dim")? as usize;
    let warning = kv.get("warning")? == "true";
    let mask = if kv.map.contains_key("mask") {
        Some(kv.vec_usize("mask")?)
    } else {
        None
    };
    let model_dim = mask.as_ref().map_or(input_dim, |m| m.len());

    let (params, mut spec) = match family {
        Family::GaussianNb => {
            let lp = kv.vec_f64("ln_prior")?;
            if lp.len() != 2 {
                return Err(Error::Config("ln_prior must have two entries".into()));
            }
            (
                ModelParams::GaussianNb(NbParams {
                    ln_prior: [lp[0], lp[1]],
                    mean: [kv.vec_f64("mean.normal")?, kv.vec_f64("mean.abnormal")?],
                    var: [kv.vec_f64("var.normal")?, kv.vec_f64("var.abnormal")?],
                }),
                VictimSpec::gaussian_nb(),
            )
        }
        Family::LogReg => (
            ModelParams::LogReg(LrParams {
                w: kv.vec_f64("w")?,
                b: kv.f64("b")?,
            }),
            VictimSpec::logreg(),
        ),
        Family::Svm => {
            let kernel = kv.kernel()?;
            let mut params = SvmParams {
                kernel,
                sv: kv.matrix("sv", model_dim)?,
                coef: kv.vec_f64("coef")?,
                sv_indices: kv.vec_usize("sv_indices")?,
                bias: kv.f64("bias")?,
                weights: None,
                sv32: Vec::new(),
            };
            params.finish();
            let mut spec = VictimSpec::svm(kernel.kind);
            spec.gamma = Some(kernel.gamma);
            spec.coef0 = kernel.coef0;
            spec.degree = kernel.degree;
            (ModelParams::Svm(params), spec)
        }
        Family::Lssvm => {
            let kernel = kv.kernel()?;
            let mut params = LssvmParams {
                kernel,
                x: kv.matrix("x", model_dim)?,
                alpha: kv.vec_f64("alpha")?,
                bias: kv.f64("bias")?,
                x32: Vec::new(),
            };
            params.finish();
            let mut spec = VictimSpec::lssvm_mi(model_dim);
            spec.feature_select_q = mask.as_ref().map(|m| m.len());
            spec.gamma = Some(kernel.gamma);
            spec.ls_gamma = kv.f64("ls_gamma")?;
            (ModelParams::Lssvm(params), spec)
        }
    };
    spec.c = kv.f64("c")?;
    spec.tol = kv.f64("tol")?;

    Ok(FittedModel {
        params,
        spec,
        mask,
        input_dim,
        convergence_warning: warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Label;
    use crate::victims::test_util::dataset;
    use crate::victims::{fit, KernelKind, VictimSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roundtrip_preserves_predictions_bit_for_bit() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let rows: Vec<(Vec<f64>, Label)> = (0..80)
            .map(|i| {
                let shift = if i % 2 == 0 { 0.0 } else { 0.45 };
                let label = if i % 2 == 0 {
                    Label::Normal
                } else {
                    Label::Abnormal
                };
                let x: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() * 0.5 + shift).collect();
                (x, label)
            })
            .collect();
        let ds = dataset(&rows);
        let dir = tempfile::tempdir().unwrap();
        for spec in [
            VictimSpec::gaussian_nb(),
            VictimSpec::logreg(),
            VictimSpec::svm(KernelKind::Rbf),
            VictimSpec::svm(KernelKind::Poly),
            VictimSpec::lssvm_mi(3),
        ] {
            let m = fit(&spec, &ds).unwrap();
            let p = dir.path().join(format!("{}.model", spec.label()));
            save_model(&m, &p).unwrap();
            let back = load_model(&p).unwrap();
            assert_eq!(back.input_dim(), m.input_dim());
            for _ in 0..200 {
                let x: Vec<f64> = (0..4).map(|_| rng.gen::<f64>()).collect();
                let a = m.decision_value(&x).unwrap();
                let b = back.decision_value(&x).unwrap();
                assert_eq!(a.to_bits(), b.to_bits(), "{}", spec.label());
            }
        }
    }
}
