//! CSV and JSON formats for zero lists, products, boundary data, measures
//! and classification results.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::{BlaschkeProduct, Zero, ZeroSequence};
use crate::chart::HalfPlanePoint;
use crate::eigen::{Atom, AtomicSingularMeasure, BoundaryModulus};
use crate::error::{invalid, Result};
use crate::geometry::{BoundaryPoint, NonEllipticNormalForm};
use crate::hardy::{BoundarySamples, SpanCase, SpanClassification};

/// Factor convention written into product JSON.
pub const PRODUCT_CONVENTION: &str = "(|a|/a)(a-z)/(1-conj(a)z)";

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct ZeroRow {
    re_z: f64,
    im_z: f64,
    multiplicity: u32,
}

/// Disc coordinates only: zeros within ~1e-16 of the circle lose their
/// chart precision. Use product JSON for lossless storage.
pub fn write_zeros_csv<W: Write>(w: W, zeros: &ZeroSequence) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for z in &zeros.zeros {
        let d = z.disc();
        wr.serialize(ZeroRow {
            re_z: d.re,
            im_z: d.im,
            multiplicity: z.multiplicity,
        })?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_zeros_csv<R: Read>(r: R) -> Result<ZeroSequence> {
    let mut rd = csv::Reader::from_reader(r);
    let mut pts = Vec::new();
    for row in rd.deserialize() {
        let row: ZeroRow = row?;
        pts.push((Complex64::new(row.re_z, row.im_z), row.multiplicity));
    }
    ZeroSequence::from_disc(&pts)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductZeroJson {
    pub re_z: f64,
    pub im_z: f64,
    pub multiplicity: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<HalfPlanePoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductJson {
    pub convention: String,
    #[serde(default = "default_intent")]
    pub blaschke_intent: bool,
    pub zeros: Vec<ProductZeroJson>,
}

fn default_intent() -> bool {
    true
}

impl From<&BlaschkeProduct> for ProductJson {
    fn from(b: &BlaschkeProduct) -> Self {
        Self {
            convention: PRODUCT_CONVENTION.into(),
            blaschke_intent: b.zeros.blaschke_intent,
            zeros: b
                .zeros
                .zeros
                .iter()
                .map(|z| {
                    let d = z.disc();
                    ProductZeroJson {
                        re_z: d.re,
                        im_z: d.im,
                        multiplicity: z.multiplicity,
                        chart: Some(z.point),
                    }
                })
                .collect(),
        }
    }
}

impl ProductJson {
    pub fn to_product(&self) -> Result<BlaschkeProduct> {
        if self.convention != PRODUCT_CONVENTION {
            return invalid(format!("unknown product convention {:?}", self.convention));
        }
        let mut zeros = Vec::with_capacity(self.zeros.len());
        for z in &self.zeros {
            if z.multiplicity == 0 {
                return invalid("zero multiplicity must be positive");
            }
            let point = match z.chart {
                Some(c) => c,
                None => crate::geometry::DiscPoint::from_re_im(z.re_z, z.im_z)?.chart(),
            };
            zeros.push(Zero {
                point,
                multiplicity: z.multiplicity,
            });
        }
        let mut seq = ZeroSequence::new(zeros);
        seq.blaschke_intent = self.blaschke_intent;
        Ok(BlaschkeProduct::new(seq))
    }
}

pub fn product_to_json(b: &BlaschkeProduct) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ProductJson::from(b))?)
}

pub fn product_from_json(s: &str) -> Result<BlaschkeProduct> {
    serde_json::from_str::<ProductJson>(s)?.to_product()
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct SampleRow {
    theta: f64,
    re: f64,
    im: f64,
}

pub fn write_boundary_samples_csv<W: Write>(w: W, s: &BoundarySamples) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for (theta, v) in s.angles().into_iter().zip(&s.values) {
        wr.serialize(SampleRow {
            theta,
            re: v.re,
            im: v.im,
        })?;
    }
    wr.flush()?;
    Ok(())
}

/// Rows must be the uniform angles `2 pi j / m` in order.
pub fn read_boundary_samples_csv<R: Read>(r: R) -> Result<BoundarySamples> {
    let mut rd = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for row in rd.deserialize() {
        let row: SampleRow = row?;
        rows.push(row);
    }
    let m = rows.len();
    let step = 2.0 * std::f64::consts::PI / m.max(1) as f64;
    if let Some((j, _)) = rows
        .iter()
        .enumerate()
        .find(|(j, r)| (r.theta - *j as f64 * step).abs() > 1e-9)
    {
        return invalid(format!("sample {j} is not on the uniform grid"));
    }
    BoundarySamples::new(rows.iter().map(|r| Complex64::new(r.re, r.im)).collect())
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct ModulusRow {
    #[serde(default)]
    arc: Option<usize>,
    arc_param: f64,
    value: f64,
}

/// Rows `(arc, arc_param, value)`. Without an `arc` column the same samples
/// are used on every arc of `J`. Parameters must be uniform on `[0, 1]`.
pub fn read_boundary_modulus_csv<R: Read>(
    r: R,
    form: &NonEllipticNormalForm,
) -> Result<BoundaryModulus> {
    let n_arcs = form.tile_j().arcs.len();
    let mut rd = csv::Reader::from_reader(r);
    let mut per_arc: Vec<Vec<(f64, f64)>> = vec![Vec::new(); n_arcs];
    let mut shared = false;
    for row in rd.deserialize() {
        let row: ModulusRow = row?;
        if !(0.0..=1.0).contains(&row.arc_param) {
            return invalid(format!("arc_param {} outside [0, 1]", row.arc_param));
        }
        let a = match row.arc {
            Some(a) if a < n_arcs => a,
            Some(a) => return invalid(format!("arc {a} does not exist, J has {n_arcs}")),
            None => {
                shared = true;
                0
            }
        };
        per_arc[a].push((row.arc_param, row.value));
    }
    if shared {
        per_arc = vec![per_arc[0].clone(); n_arcs];
    }
    let mut arcs = Vec::with_capacity(n_arcs);
    for (a, mut rows) in per_arc.into_iter().enumerate() {
        rows.sort_by(|x, y| x.0.total_cmp(&y.0));
        let n = rows.len();
        if n < 2 {
            return invalid(format!("arc {a} needs at least two samples"));
        }
        for (i, (u, _)) in rows.iter().enumerate() {
            if (u - i as f64 / (n - 1) as f64).abs() > 1e-9 {
                return invalid(format!("arc {a}: samples must be uniform on [0, 1]"));
            }
        }
        arcs.push(rows.into_iter().map(|(_, v)| v).collect());
    }
    BoundaryModulus::new(arcs)
}

pub fn write_boundary_modulus_csv<W: Write>(w: W, f0: &BoundaryModulus) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for (a, s) in f0.arcs.iter().enumerate() {
        for (i, v) in s.iter().enumerate() {
            wr.serialize(ModulusRow {
                arc: Some(a),
                arc_param: i as f64 / (s.len() - 1) as f64,
                value: *v,
            })?;
        }
    }
    wr.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AtomJson {
    pub theta: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub atoms: Vec<AtomJson>,
}

impl From<&AtomicSingularMeasure> for MeasureJson {
    fn from(m: &AtomicSingularMeasure) -> Self {
        Self {
            atoms: m
                .atoms
                .iter()
                .map(|a| AtomJson {
                    theta: a.point.angle(),
                    mass: a.mass,
                })
                .collect(),
        }
    }
}

impl MeasureJson {
    pub fn to_measure(&self) -> Result<AtomicSingularMeasure> {
        AtomicSingularMeasure::new(
            self.atoms
                .iter()
                .map(|a| Atom {
                    point: BoundaryPoint::from_angle(a.theta),
                    mass: a.mass,
                })
                .collect(),
        )
    }
}

pub fn measure_to_json(m: &AtomicSingularMeasure) -> Result<String> {
    Ok(serde_json::to_string_pretty(&MeasureJson::from(m))?)
}

pub fn measure_from_json(s: &str) -> Result<AtomicSingularMeasure> {
    serde_json::from_str::<MeasureJson>(s)?.to_measure()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationResiduals {
    pub gamma_modulus_error: f64,
    pub max_residual: f64,
    pub grid_points: usize,
}

/// `{case, gamma, residuals}` summary of a span classification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub case: String,
    pub gamma: Option<Complex64>,
    pub residuals: Option<ClassificationResiduals>,
    pub not_phi_invariant: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<ProductJson>,
}

impl From<&SpanClassification> for ClassificationJson {
    fn from(c: &SpanClassification) -> Self {
        let (case, product) = match &c.case {
            SpanCase::WholeSpace => ("WholeSpace", None),
            SpanCase::ConstantsOnly => ("ConstantsOnly", None),
            SpanCase::ModelSpace { b } => ("ModelSpace", Some(ProductJson::from(b))),
        };
        Self {
            case: case.into(),
            gamma: c.check.map(|k| k.gamma),
            residuals: c.check.map(|k| ClassificationResiduals {
                gamma_modulus_error: k.gamma_modulus_error,
                max_residual: k.max_residual,
                grid_points: k.grid_points,
            }),
            not_phi_invariant: c.not_phi_invariant,
            product,
        }
    }
}

pub fn classification_to_json(c: &SpanClassification) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ClassificationJson::from(c))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{blaschke_eigenvector, orbit_measure};
    use crate::geometry::DiscPoint;

    #[test]
    fn zeros_round_trip() {
        let seq = ZeroSequence::from_disc(&[
            (Complex64::new(0.1, -0.2), 1),
            (Complex64::new(-0.5, 0.5), 3),
        ])
        .unwrap();
        let mut buf = Vec::new();
        write_zeros_csv(&mut buf, &seq).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("re_z,im_z,multiplicity\n"));
        let back = read_zeros_csv(&buf[..]).unwrap();
        for (a, b) in seq.zeros.iter().zip(&back.zeros) {
            assert!((a.disc() - b.disc()).norm() < 1e-15);
            assert_eq!(a.multiplicity, b.multiplicity);
        }
        assert!(read_zeros_csv("re_z,im_z,multiplicity\n1.5,0,1\n".as_bytes()).is_err());
    }

    #[test]
    fn product_json_is_lossless() {
        let form = NonEllipticNormalForm::hyperbolic(2.0).unwrap();
        let w = DiscPoint::from_re_im(0.3, 0.1).unwrap();
        let b = blaschke_eigenvector(&form, &[w], 60).unwrap().product;
        let s = product_to_json(&b).unwrap();
        assert!(s.contains(PRODUCT_CONVENTION));
        assert_eq!(product_from_json(&s).unwrap(), b);
        let bad = s.replace(PRODUCT_CONVENTION, "other");
        assert!(product_from_json(&bad).is_err());
    }

    #[test]
    fn boundary_round_trips() {
        let s = BoundarySamples::from_fn(16, |z| z * z + 1.0).unwrap();
        let mut buf = Vec::new();
        write_boundary_samples_csv(&mut buf, &s).unwrap();
        assert_eq!(read_boundary_samples_csv(&buf[..]).unwrap(), s);

        let form = NonEllipticNormalForm::hyperbolic(2.0).unwrap();
        let f0 = BoundaryModulus::from_fn(&form, 5, |a, u| 1.0 + a as f64 + u).unwrap();
        let mut buf = Vec::new();
        write_boundary_modulus_csv(&mut buf, &f0).unwrap();
        assert_eq!(read_boundary_modulus_csv(&buf[..], &form).unwrap(), f0);
        let shared = "arc_param,value\n0,1\n0.5,2\n1,3\n";
        let g = read_boundary_modulus_csv(shared.as_bytes(), &form).unwrap();
        assert_eq!(g.arcs, vec![vec![1.0, 2.0, 3.0]; 2]);
        assert!(read_boundary_modulus_csv("arc_param,value\n0,1\n1,-1\n".as_bytes(), &form).is_err());
        assert!(read_boundary_modulus_csv("arc_param,value\n0,1\n0.3,1\n1,1\n".as_bytes(), &form).is_err());
    }

    #[test]
    fn measure_round_trip() {
        let form = NonEllipticNormalForm::hyperbolic(2.0).unwrap();
        let mid = form.tile_j().arcs[1].point(0.25);
        let nu = AtomicSingularMeasure::dirac(mid, 0.7).unwrap();
        let m = orbit_measure(&nu, &form, 4).unwrap().measure;
        let back = measure_from_json(&measure_to_json(&m).unwrap()).unwrap();
        assert_eq!(back.atoms.len(), m.atoms.len());
        for (a, b) in m.atoms.iter().zip(&back.atoms) {
            assert_eq!(a.mass, b.mass);
            assert!((a.point.value() - b.point.value()).norm() < 1e-15);
        }
    }
}
