//! Problem representation for `min cᵀx  s.t. (A + λD)x {=,≤} b, x ≥ 0`.
//!
//! Problems are exchanged as JSON documents with dense row-major matrices:
//!
//! ```json
//! { "c": [1, 3], "A": [[1, 1]], "D": [[0, 1]], "b": [2], "senses": ["eq"],
//!   "lambda": { "from": 0, "to": 3, "count": 4 } }
//! ```
//!
//! The `lambda` key is optional and is either `{"values": [...]}` or
//! `{"from": x, "to": y, "count": k}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Eq,
    Le,
}

/// A linear program whose constraint matrix is `A + λD`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricLP {
    c: Vec<f64>,
    a: DMatrix<f64>,
    d: DMatrix<f64>,
    b: Vec<f64>,
    senses: Vec<Sense>,
}

impl ParametricLP {
    pub fn new(
        c: Vec<f64>,
        a: DMatrix<f64>,
        d: DMatrix<f64>,
        b: Vec<f64>,
        senses: Vec<Sense>,
    ) -> Result<Self> {
        let (m, n) = a.shape();
        if m == 0 {
            return Err(dim("A", "at least one constraint row is required".into()));
        }
        if d.shape() != (m, n) {
            return Err(dim(
                "D",
                format!("expected {m}x{n} like A, got {}x{}", d.nrows(), d.ncols()),
            ));
        }
        if c.len() != n {
            return Err(dim("c", format!("expected length {n}, got {}", c.len())));
        }
        if b.len() != m {
            return Err(dim("b", format!("expected length {m}, got {}", b.len())));
        }
        if senses.len() != m {
            return Err(dim("senses", format!("expected length {m}, got {}", senses.len())));
        }
        let slacks = senses.iter().filter(|s| **s == Sense::Le).count();
        if n + slacks < m {
            return Err(dim(
                "A",
                format!("{m} rows but only {} columns after standardization", n + slacks),
            ));
        }
        let finite = c.iter().chain(&b).chain(a.iter()).chain(d.iter()).all(|v| v.is_finite());
        if !finite {
            return Err(Error::Parse("non-finite coefficient".into()));
        }
        Ok(Self { c, a, d, b, senses })
    }

    /// All-equality problem.
    pub fn standard(c: Vec<f64>, a: DMatrix<f64>, d: DMatrix<f64>, b: Vec<f64>) -> Result<Self> {
        let m = a.nrows();
        Self::new(c, a, d, b, vec![Sense::Eq; m])
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }
    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }
    pub fn d(&self) -> &DMatrix<f64> {
        &self.d
    }
    pub fn b(&self) -> &[f64] {
        &self.b
    }
    pub fn senses(&self) -> &[Sense] {
        &self.senses
    }
    pub fn rows(&self) -> usize {
        self.a.nrows()
    }
    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn is_standard_form(&self) -> bool {
        self.senses.iter().all(|s| *s == Sense::Eq)
    }

    /// `A + λD`.
    pub fn matrix_at(&self, lambda: f64) -> DMatrix<f64> {
        if lambda == 0.0 {
            self.a.clone()
        } else {
            &self.a + &self.d * lambda
        }
    }

    /// The same problem reparametrized around `anchor`: `A' = A + anchor·D`,
    /// so that `P'(μ) = P(anchor + μ)`.
    pub fn shifted(&self, anchor: f64) -> Self {
        Self {
            c: self.c.clone(),
            a: self.matrix_at(anchor),
            d: self.d.clone(),
            b: self.b.clone(),
            senses: self.senses.clone(),
        }
    }

    /// Appends one slack column per `le` row (A-coefficient 1, D and c
    /// coefficients 0). Slack columns follow the original columns in row
    /// order. Idempotent.
    pub fn to_standard_form(&self) -> Self {
        if self.is_standard_form() {
            return self.clone();
        }
        let (m, n) = self.a.shape();
        let le_rows: Vec<usize> = (0..m).filter(|&i| self.senses[i] == Sense::Le).collect();
        let n2 = n + le_rows.len();
        let mut a = DMatrix::zeros(m, n2);
        let mut d = DMatrix::zeros(m, n2);
        a.columns_mut(0, n).copy_from(&self.a);
        d.columns_mut(0, n).copy_from(&self.d);
        for (k, &row) in le_rows.iter().enumerate() {
            a[(row, n + k)] = 1.0;
        }
        let mut c = self.c.clone();
        c.resize(n2, 0.0);
        Self { c, a, d, b: self.b.clone(), senses: vec![Sense::Eq; m] }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ProblemDocument::from_lp(self, None))
            .expect("problem documents always serialize")
    }
}

fn dim(field: &str, detail: String) -> Error {
    Error::Dimension { field: field.into(), detail }
}

/// An ordered set of basic column indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Basis(Vec<usize>);

impl Basis {
    /// Validates that the indices are distinct and lie in `[0, n)`.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for &j in &indices {
            if j >= n {
                return Err(Error::InvalidBasis(format!("index {j} out of range for {n} columns")));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidBasis(format!("duplicate index {j}")));
            }
        }
        Ok(Self(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Same column set, ignoring order.
    pub fn same_set(&self, other: &Basis) -> bool {
        let mut a = self.0.clone();
        let mut b = other.0.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    /// Nonbasic columns in ascending order.
    pub fn complement(&self, n: usize) -> Vec<usize> {
        let mut basic = vec![false; n];
        for &j in &self.0 {
            basic[j] = true;
        }
        (0..n).filter(|&j| !basic[j]).collect()
    }
}

impl std::fmt::Display for Basis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, j) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}

/// Basic and nonbasic blocks of `A`, `D` and `c`. Basic blocks follow the
/// basis order; nonbasic blocks follow ascending column order.
#[derive(Debug, Clone)]
pub struct BasisPartition {
    pub basis: Basis,
    pub nonbasic: Vec<usize>,
    pub a_b: DMatrix<f64>,
    pub d_b: DMatrix<f64>,
    pub a_n: DMatrix<f64>,
    pub d_n: DMatrix<f64>,
    pub c_b: Vec<f64>,
    pub c_n: Vec<f64>,
}

pub fn partition(lp: &ParametricLP, basis: &Basis) -> Result<BasisPartition> {
    if !lp.is_standard_form() {
        return Err(Error::NotStandardForm);
    }
    let (m, n) = lp.a.shape();
    // revalidate: a Basis may have been built for a different n
    let basis = Basis::new(basis.0.clone(), n)?;
    if basis.len() != m {
        return Err(Error::InvalidBasis(format!("expected {m} indices, got {}", basis.len())));
    }
    let nonbasic = basis.complement(n);
    let pick = |mat: &DMatrix<f64>, cols: &[usize]| mat.select_columns(cols.iter());
    Ok(BasisPartition {
        a_b: pick(&lp.a, basis.indices()),
        d_b: pick(&lp.d, basis.indices()),
        a_n: pick(&lp.a, &nonbasic),
        d_n: pick(&lp.d, &nonbasic),
        c_b: basis.indices().iter().map(|&j| lp.c[j]).collect(),
        c_n: nonbasic.iter().map(|&j| lp.c[j]).collect(),
        nonbasic,
        basis,
    })
}

/// The λ values requested by a problem file or on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    Values { values: Vec<f64> },
    Range { from: f64, to: f64, count: usize },
}

impl LambdaSpec {
    /// Expands the spec; ranges include both endpoints and `count = 1`
    /// yields `[from]`.
    pub fn expand(&self) -> Vec<f64> {
        match self {
            LambdaSpec::Values { values } => values.clone(),
            LambdaSpec::Range { from, to, count } => match *count {
                0 => Vec::new(),
                1 => vec![*from],
                k => (0..k)
                    .map(|i| {
                        if i == k - 1 {
                            *to
                        } else {
                            from + (to - from) * (i as f64) / ((k - 1) as f64)
                        }
                    })
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProblemDocument {
    c: Vec<f64>,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    d: Vec<Vec<f64>>,
    b: Vec<f64>,
    senses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<LambdaSpec>,
}

impl ProblemDocument {
    fn from_lp(lp: &ParametricLP, lambda: Option<LambdaSpec>) -> Self {
        let rows = |m: &DMatrix<f64>| {
            (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
        };
        Self {
            c: lp.c.clone(),
            a: rows(&lp.a),
            d: rows(&lp.d),
            b: lp.b.clone(),
            senses: lp
                .senses
                .iter()
                .map(|s| match s {
                    Sense::Eq => "eq".to_string(),
                    Sense::Le => "le".to_string(),
                })
                .collect(),
            lambda,
        }
    }
}

/// A parsed problem file.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub lp: ParametricLP,
    pub lambda: Option<LambdaSpec>,
}

pub fn parse_document(text: &str) -> Result<ProblemFile> {
    let doc: ProblemDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let a = dense_rows(&doc.a, "A")?;
    let d = dense_rows(&doc.d, "D")?;
    if a.ncols() != doc.c.len() {
        return Err(dim("A", format!("rows have {} entries but c has {}", a.ncols(), doc.c.len())));
    }
    let senses = doc
        .senses
        .iter()
        .enumerate()
        .map(|(row, s)| match s.as_str() {
            "eq" => Ok(Sense::Eq),
            "le" => Ok(Sense::Le),
            other => Err(Error::UnknownSense { row, token: other.to_string() }),
        })
        .collect::<Result<Vec<_>>>()?;
    let lp = ParametricLP::new(doc.c, a, d, doc.b, senses)?;
    Ok(ProblemFile { lp, lambda: doc.lambda })
}

pub fn parse_problem(text: &str) -> Result<ParametricLP> {
    parse_document(text).map(|f| f.lp)
}

fn dense_rows(rows: &[Vec<f64>], field: &str) -> Result<DMatrix<f64>> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(dim(field, format!("row {i} has {} entries, row 0 has {n}", r.len())));
        }
    }
    Ok(DMatrix::from_fn(m, n, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P1: &str = r#"{"c":[1],"A":[[2]],"D":[[1]],"b":[4],"senses":["eq"]}"#;

    fn p4() -> ParametricLP {
        ParametricLP::standard(
            vec![1.0, 3.0],
            DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
            DMatrix::from_row_slice(1, 2, &[0.0, 1.0]),
            vec![2.0],
        )
        .unwrap()
    }

    #[test]
    fn parses_scalar_problem() {
        let lp = parse_problem(P1).unwrap();
        assert_eq!((lp.rows(), lp.cols()), (1, 1));
        assert_eq!(lp.a()[(0, 0)], 2.0);
        assert_eq!(lp.d()[(0, 0)], 1.0);
        assert_eq!(lp.b(), &[4.0]);
        assert!(lp.is_standard_form());
    }

    #[test]
    fn rejects_rhs_length_mismatch() {
        let text = r#"{"c":[1,1],"A":[[1,0],[0,1]],"D":[[0,0],[0,0]],"b":[1,2,3],"senses":["eq","eq"]}"#;
        match parse_problem(text) {
            Err(Error::Dimension { field, .. }) => assert_eq!(field, "b"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reports_ragged_rows_and_bad_senses() {
        let ragged = r#"{"c":[1,1],"A":[[1,0],[0]],"D":[[0,0],[0,0]],"b":[1,2],"senses":["eq","eq"]}"#;
        let err = parse_problem(ragged).unwrap_err().to_string();
        assert!(err.contains("row 1"), "{err}");
        let sense = r#"{"c":[1],"A":[[2]],"D":[[1]],"b":[4],"senses":["ge"]}"#;
        assert_eq!(
            parse_problem(sense).unwrap_err(),
            Error::UnknownSense { row: 0, token: "ge".into() }
        );
        assert!(matches!(parse_problem("{\"c\": [1,"), Err(Error::Parse(_))));
    }

    #[test]
    fn parses_lambda_specs() {
        let text = r#"{"c":[1],"A":[[2]],"D":[[1]],"b":[4],"senses":["eq"],"lambda":{"from":0,"to":3,"count":4}}"#;
        let f = parse_document(text).unwrap();
        assert_eq!(f.lambda.unwrap().expand(), vec![0.0, 1.0, 2.0, 3.0]);
        let text = r#"{"c":[1],"A":[[2]],"D":[[1]],"b":[4],"senses":["eq"],"lambda":{"values":[0.5,-1]}}"#;
        assert_eq!(parse_document(text).unwrap().lambda.unwrap().expand(), vec![0.5, -1.0]);
        let one = LambdaSpec::Range { from: 2.0, to: 5.0, count: 1 };
        assert_eq!(one.expand(), vec![2.0]);
    }

    #[test]
    fn slack_columns_for_le_rows() {
        let lp = ParametricLP::new(
            vec![1.0],
            DMatrix::from_element(1, 1, 1.0),
            DMatrix::from_element(1, 1, 1.0),
            vec![4.0],
            vec![Sense::Le],
        )
        .unwrap();
        let s = lp.to_standard_form();
        assert_eq!(s.cols(), 2);
        assert_eq!((s.a()[(0, 1)], s.d()[(0, 1)], s.c()[1]), (1.0, 0.0, 0.0));
        assert!(s.is_standard_form());
        assert_eq!(s.to_standard_form(), s);
        let p1 = parse_problem(P1).unwrap();
        assert_eq!(p1.to_standard_form(), p1);
    }

    #[test]
    fn partition_extracts_blocks_in_basis_order() {
        let p1 = parse_problem(P1).unwrap();
        let part = partition(&p1, &Basis::new(vec![0], 1).unwrap()).unwrap();
        assert_eq!(part.a_b[(0, 0)], 2.0);
        assert_eq!(part.d_b[(0, 0)], 1.0);
        assert_eq!(part.c_b, vec![1.0]);
        assert_eq!(part.a_n.ncols(), 0);
        assert!(part.c_n.is_empty());

        let part = partition(&p4(), &Basis::new(vec![0], 2).unwrap()).unwrap();
        assert_eq!(part.a_b[(0, 0)], 1.0);
        assert_eq!(part.d_b[(0, 0)], 0.0);
        assert_eq!(part.a_n[(0, 0)], 1.0);
        assert_eq!(part.d_n[(0, 0)], 1.0);
        assert_eq!(part.c_n, vec![3.0]);
    }

    #[test]
    fn basis_validation() {
        assert!(matches!(Basis::new(vec![0, 0], 2), Err(Error::InvalidBasis(_))));
        assert!(matches!(Basis::new(vec![3], 2), Err(Error::InvalidBasis(_))));
        let lp = p4();
        let two = Basis::new(vec![0, 1], 2).unwrap();
        assert!(partition(&lp, &two).is_err());
        let le = ParametricLP::new(
            vec![1.0],
            DMatrix::from_element(1, 1, 1.0),
            DMatrix::from_element(1, 1, 0.0),
            vec![1.0],
            vec![Sense::Le],
        )
        .unwrap();
        assert_eq!(
            partition(&le, &Basis::new(vec![0], 1).unwrap()).unwrap_err(),
            Error::NotStandardForm
        );
    }
}
