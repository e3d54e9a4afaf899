//! JSON artifacts and the S-expression term syntax.
//!
//! Every artifact is a JSON object with a `kind` discriminator, one of
//! `frame`, `bao`, `morphism`, `schema`, `instance` or `campaign`.
//! Relations are pair lists, algebra elements are sorted atom-index
//! lists, and terms are prefix S-expressions like `(c 0 (* x (- y)))`.

use crate::amalgam::AmalgamationInstance;
use crate::bao::{FiniteBao, Signature, Transformation};
use crate::boolean::{Elem, FiniteBA};
use crate::error::{Error, Result};
use crate::frame::{AlgebraMorphism, Frame, FrameMorphism, Rel};
use crate::report::Report;
use crate::term::{Equation, Term};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;

pub fn elem_to_atoms(x: Elem) -> Vec<usize> {
    (0..Elem::BITS as usize).filter(|&i| x & (1 << i) != 0).collect()
}

pub fn atoms_to_elem(atoms: &[usize], atom_count: usize) -> Result<Elem> {
    let mut x = 0;
    for &a in atoms {
        if a >= atom_count {
            return Err(Error::Input(format!(
                "atom index {a} out of range for {atom_count} atoms"
            )));
        }
        x |= 1 << a;
    }
    Ok(x)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignatureDoc {
    pub dim: usize,
    pub transformations: Vec<Vec<usize>>,
    pub with_diagonals: bool,
}

impl SignatureDoc {
    pub fn of(sig: &Signature) -> Self {
        SignatureDoc {
            dim: sig.dim(),
            transformations: sig.transformations().iter().map(|t| t.0.clone()).collect(),
            with_diagonals: sig.with_diagonals(),
        }
    }

    pub fn build(&self) -> Result<Signature> {
        Signature::new(
            self.dim,
            self.transformations
                .iter()
                .map(|v| Transformation(v.clone()))
                .collect(),
            self.with_diagonals,
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameDoc {
    pub signature: SignatureDoc,
    pub universe: usize,
    pub t: Vec<Vec<(usize, usize)>>,
    pub s: Vec<Vec<(usize, usize)>>,
    pub d: Vec<Vec<usize>>,
}

impl FrameDoc {
    pub fn of(f: &Frame) -> Self {
        let rel = |r: &Rel| -> Vec<(usize, usize)> { r.iter().copied().collect() };
        FrameDoc {
            signature: SignatureDoc::of(f.sig()),
            universe: f.universe(),
            t: (0..f.sig().dim()).map(|i| rel(f.t(i))).collect(),
            s: (0..f.sig().transformations().len())
                .map(|k| rel(f.s(k)))
                .collect(),
            d: if f.sig().with_diagonals() {
                (0..f.sig().dim() * f.sig().dim())
                    .map(|slot| {
                        f.d(slot / f.sig().dim(), slot % f.sig().dim())
                            .iter()
                            .copied()
                            .collect()
                    })
                    .collect()
            } else {
                Vec::new()
            },
        }
    }

    pub fn build(&self) -> Result<Frame> {
        let sig = self.signature.build()?;
        let rel = |pairs: &Vec<(usize, usize)>| -> Rel { pairs.iter().copied().collect() };
        Frame::new(
            sig,
            self.universe,
            self.t.iter().map(rel).collect(),
            self.s.iter().map(rel).collect(),
            self.d
                .iter()
                .map(|v| v.iter().copied().collect::<BTreeSet<usize>>())
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaoDoc {
    pub signature: SignatureDoc,
    pub atoms: usize,
    /// `cyl[i][a]`: image of atom `a` under `c_i`, as an atom list.
    pub cyl: Vec<Vec<Vec<usize>>>,
    /// `subst[k][a]`: image of atom `a` under the `k`-th substitution.
    pub subst: Vec<Vec<Vec<usize>>>,
    pub diag: Vec<Vec<usize>>,
}

impl BaoDoc {
    pub fn of(a: &FiniteBao) -> Self {
        let n = a.atom_count();
        let sig = a.sig();
        BaoDoc {
            signature: SignatureDoc::of(sig),
            atoms: n,
            cyl: (0..sig.dim())
                .map(|i| (0..n).map(|at| elem_to_atoms(a.apply_cyl(i, 1 << at))).collect())
                .collect(),
            subst: (0..sig.transformations().len())
                .map(|k| {
                    (0..n)
                        .map(|at| elem_to_atoms(a.apply_subst(k, 1 << at)))
                        .collect()
                })
                .collect(),
            diag: if sig.with_diagonals() {
                (0..sig.dim() * sig.dim())
                    .map(|slot| {
                        elem_to_atoms(
                            a.diag(slot / sig.dim(), slot % sig.dim()).unwrap(),
                        )
                    })
                    .collect()
            } else {
                Vec::new()
            },
        }
    }

    pub fn build(&self) -> Result<FiniteBao> {
        let sig = self.signature.build()?;
        let ba = FiniteBA::new(self.atoms)?;
        let table = |t: &Vec<Vec<usize>>| -> Result<Vec<Elem>> {
            t.iter().map(|v| atoms_to_elem(v, self.atoms)).collect()
        };
        FiniteBao::new(
            ba,
            sig,
            self.cyl.iter().map(table).collect::<Result<_>>()?,
            self.subst.iter().map(table).collect::<Result<_>>()?,
            table(&self.diag)?,
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "level", rename_all = "lowercase")]
pub enum MorphismDoc {
    Algebra {
        source: BaoDoc,
        target: BaoDoc,
        /// Image of each source element, indexed by element, as atom lists.
        map: Vec<Vec<usize>>,
    },
    Frame {
        source: FrameDoc,
        target: FrameDoc,
        map: Vec<usize>,
    },
}

impl MorphismDoc {
    pub fn of_algebra(h: &AlgebraMorphism) -> Self {
        MorphismDoc::Algebra {
            source: BaoDoc::of(&h.source),
            target: BaoDoc::of(&h.target),
            map: h.map.iter().map(|&x| elem_to_atoms(x)).collect(),
        }
    }

    pub fn of_frame(m: &FrameMorphism) -> Self {
        MorphismDoc::Frame {
            source: FrameDoc::of(&m.source),
            target: FrameDoc::of(&m.target),
            map: m.map.clone(),
        }
    }

    pub fn build_algebra(&self) -> Result<AlgebraMorphism> {
        match self {
            MorphismDoc::Algebra { source, target, map } => {
                let s = source.build()?;
                let t = target.build()?;
                let map = map
                    .iter()
                    .map(|v| atoms_to_elem(v, t.atom_count()))
                    .collect::<Result<_>>()?;
                AlgebraMorphism::new(s, t, map)
            }
            MorphismDoc::Frame { .. } => {
                Err(Error::Input("expected an algebra morphism".into()))
            }
        }
    }

    pub fn build_frame(&self) -> Result<FrameMorphism> {
        match self {
            MorphismDoc::Frame { source, target, map } => {
                FrameMorphism::new(source.build()?, target.build()?, map.clone())
            }
            MorphismDoc::Algebra { .. } => {
                Err(Error::Input("expected a frame morphism".into()))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemaDoc {
    /// Each axiom as `name` and an equation `lhs = rhs` in S-expressions.
    pub axioms: Vec<(String, String)>,
}

impl SchemaDoc {
    pub fn of(eqs: &[(String, Equation)]) -> Self {
        SchemaDoc {
            axioms: eqs
                .iter()
                .map(|(n, eq)| (n.clone(), format!("{eq}")))
                .collect(),
        }
    }

    pub fn equations(&self) -> Result<Vec<(String, Equation)>> {
        self.axioms
            .iter()
            .map(|(n, s)| Ok((n.clone(), parse_equation(s)?)))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub f: MorphismDoc,
    pub h: MorphismDoc,
    pub schema: Vec<String>,
}

impl InstanceDoc {
    pub fn of(inst: &AmalgamationInstance) -> Self {
        InstanceDoc {
            f: MorphismDoc::of_algebra(&inst.f),
            h: MorphismDoc::of_algebra(&inst.h),
            schema: inst.schema.iter().map(|eq| format!("{eq}")).collect(),
        }
    }

    pub fn build(&self) -> Result<AmalgamationInstance> {
        let schema = self
            .schema
            .iter()
            .map(|s| parse_equation(s))
            .collect::<Result<_>>()?;
        AmalgamationInstance::new(self.f.build_algebra()?, self.h.build_algebra()?, schema)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignDoc {
    pub name: String,
    pub seed: Option<u64>,
    pub cases: usize,
    pub passed: bool,
    pub checks: Vec<CampaignCheck>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignCheck {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CampaignDoc {
    pub fn of(name: &str, seed: Option<u64>, cases: usize, report: &Report) -> Self {
        CampaignDoc {
            name: name.into(),
            seed,
            cases,
            passed: report.passed(),
            checks: report
                .entries
                .iter()
                .map(|e| CampaignCheck {
                    name: e.name.clone(),
                    pass: e.pass,
                    witness: e.witness.clone(),
                })
                .collect(),
        }
    }
}

/// The top-level artifact, discriminated by `kind`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Frame(FrameDoc),
    Bao(BaoDoc),
    Morphism(MorphismDoc),
    Schema(SchemaDoc),
    Instance(InstanceDoc),
    Campaign(CampaignDoc),
}

pub fn save_document(path: &Path, doc: &Document) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_document(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            at: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => self.err(format!("expected `{}`, found `{}`", c as char, got as char)),
            None => self.err(format!("expected `{}`, found end of input", c as char)),
        }
    }

    fn word(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && !self.src[self.pos].is_ascii_whitespace()
            && self.src[self.pos] != b'('
            && self.src[self.pos] != b')'
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a token");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn index(&mut self) -> Result<usize> {
        self.skip_ws();
        let at = self.pos;
        let w = self.word()?;
        w.parse().map_err(|_| Error::Parse {
            at,
            msg: format!("expected an index, found `{w}`"),
        })
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            None => self.err("expected a term, found end of input"),
            Some(b'(') => {
                self.expect(b'(')?;
                let at = self.pos;
                let head = self.word()?;
                let t = match head.as_str() {
                    "+" => Term::Join(Box::new(self.term()?), Box::new(self.term()?)),
                    "*" => Term::Meet(Box::new(self.term()?), Box::new(self.term()?)),
                    "-" => Term::Compl(Box::new(self.term()?)),
                    "c" => {
                        let i = self.index()?;
                        Term::Cyl(i, Box::new(self.term()?))
                    }
                    "s" => {
                        self.expect(b'(')?;
                        let mut vals = Vec::new();
                        while self.peek() != Some(b')') {
                            if self.peek().is_none() {
                                return self.err("unterminated transformation");
                            }
                            vals.push(self.index()?);
                        }
                        self.expect(b')')?;
                        Term::Subst(Transformation(vals), Box::new(self.term()?))
                    }
                    "d" => Term::Diag(self.index()?, self.index()?),
                    other => {
                        return Err(Error::Parse {
                            at,
                            msg: format!("unknown operator `{other}`"),
                        })
                    }
                };
                self.expect(b')')?;
                Ok(t)
            }
            Some(b')') => self.err("unexpected `)`"),
            Some(_) => {
                let w = self.word()?;
                Ok(match w.as_str() {
                    "0" => Term::Zero,
                    "1" => Term::One,
                    _ => Term::var(&w),
                })
            }
        }
    }
}

/// Parse a term in prefix S-expression syntax.
pub fn parse_term(src: &str) -> Result<Term> {
    let mut p = Parser::new(src);
    let t = p.term()?;
    if p.peek().is_some() {
        return p.err("trailing input after term");
    }
    Ok(t)
}

/// Parse an equation `lhs = rhs` of two S-expression terms.
pub fn parse_equation(src: &str) -> Result<Equation> {
    let mut p = Parser::new(src);
    let lhs = p.term()?;
    match p.peek() {
        Some(b'=') => p.pos += 1,
        _ => return p.err("expected `=` between the sides of an equation"),
    }
    let rhs = p.term()?;
    if p.peek().is_some() {
        return p.err("trailing input after equation");
    }
    Ok(Equation::new(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{complex_algebra, dual_morphism};
    use crate::schema::default_schema;

    fn fixture_frame() -> Frame {
        let sig = Signature::full(2, true).unwrap();
        let t = vec![
            [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().collect(),
            [(0, 0), (1, 1)].into_iter().collect(),
        ];
        let action: Vec<Vec<usize>> = sig
            .transformations()
            .iter()
            .map(|_| vec![0, 1])
            .collect();
        let d = vec![
            [0, 1].into_iter().collect(),
            [0].into_iter().collect(),
            [0].into_iter().collect(),
            [0, 1].into_iter().collect(),
        ];
        Frame::from_action(sig, 2, t, &action, d).unwrap()
    }

    #[test]
    fn term_round_trip() {
        let samples = [
            "x",
            "0",
            "(+ x (- y))",
            "(* (c 0 x) (s (1 0) y))",
            "(d 0 1)",
            "(c 1 (s (0 0) (* x 1)))",
        ];
        for s in samples {
            let t = parse_term(s).unwrap();
            assert_eq!(format!("{t}"), s);
        }
    }

    #[test]
    fn equation_round_trip() {
        let sig = Signature::full(2, true).unwrap();
        for ax in default_schema(&sig) {
            let printed = format!("{}", ax.equation);
            let parsed = parse_equation(&printed).unwrap();
            assert_eq!(parsed, ax.equation);
        }
    }

    #[test]
    fn parse_errors_report_positions() {
        match parse_term("(c x y)") {
            Err(Error::Parse { at, .. }) => assert_eq!(at, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_term("(q x)") {
            Err(Error::Parse { at, msg }) => {
                assert_eq!(at, 1);
                assert!(msg.contains("unknown operator"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_term("(+ x y) z").is_err());
        assert!(parse_equation("(+ x y)").is_err());
    }

    #[test]
    fn frame_and_bao_documents_round_trip() {
        let f = fixture_frame();
        let doc = FrameDoc::of(&f);
        let back = doc.build().unwrap();
        assert_eq!(format!("{:?}", f), format!("{:?}", back));

        let a = complex_algebra(&f).unwrap();
        let adoc = BaoDoc::of(&a);
        let aback = adoc.build().unwrap();
        assert_eq!(a, aback);

        let json = serde_json::to_string(&Document::Frame(doc)).unwrap();
        assert!(json.contains("\"kind\":\"frame\""));
        let reparsed: Document = serde_json::from_str(&json).unwrap();
        match reparsed {
            Document::Frame(d) => assert_eq!(d.build().unwrap().universe(), f.universe()),
            _ => panic!("kind mismatch"),
        }
    }

    #[test]
    fn morphism_document_round_trip() {
        let f = fixture_frame();
        let a = complex_algebra(&f).unwrap();
        let h = AlgebraMorphism::identity(&a);
        let doc = MorphismDoc::of_algebra(&h);
        let back = doc.build_algebra().unwrap();
        assert_eq!(h.map, back.map);

        let m = dual_morphism(&h).unwrap();
        let fdoc = MorphismDoc::of_frame(&m);
        let fback = fdoc.build_frame().unwrap();
        assert_eq!(m.map, fback.map);
        assert!(fdoc.build_algebra().is_err());
    }
}
