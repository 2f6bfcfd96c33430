//! Components of T-ideals: full multilinearization, the span of all
//! monomial substitution instances of a set of generators inside one
//! component, and certified membership in that span.

use std::collections::HashMap;

use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::assoc::{Generator, MultiDegree};
use crate::cache::{digest, Lookup};
use crate::component::{parse_rat, sparse_strings, Certificate, Engine, SubspaceCert};
use crate::error::{Error, Result};
use crate::linalg::{exact_solve, pivot_rows_mod};
use crate::magma::{jmul, JPoly, JTerm};
use crate::modular::default_primes;
use crate::Rational;

/// A multilinear polynomial over slot generators: variable `i` of the
/// original polynomial owns slots `offsets[i] .. offsets[i] + slots[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearForm {
    pub degree: MultiDegree,
    pub slots: Vec<u32>,
    pub poly: JPoly,
}

impl MultilinearForm {
    fn offset(&self, var: usize) -> usize {
        self.slots[..var].iter().sum::<u32>() as usize
    }

    pub fn slot_generator(&self, var: usize, k: usize) -> Generator {
        Generator((self.offset(var) + k) as u8)
    }

    /// Identifies every slot with its variable; equals `Π dᵢ!·f`.
    pub fn restitute(&self) -> JPoly {
        let mut images = Vec::new();
        for (i, &n) in self.slots.iter().enumerate() {
            for _ in 0..n {
                images.push(JPoly::generator(Generator(i as u8)));
            }
        }
        self.poly
            .substitute(&images)
            .expect("every slot generator has an image")
    }

    /// Replaces slot generator `k` by the monomial `images[k]`.
    pub fn substitute_monomials(&self, images: &[JTerm]) -> JPoly {
        let mut out = JPoly::zero();
        for (t, c) in self.poly.iter() {
            let s = t.substitute(&mut |g| images[g.index()].clone());
            out.add_term(s, c.clone());
        }
        out
    }
}

/// Full multilinearization of a multihomogeneous polynomial.
pub fn multilinearize(f: &JPoly) -> Result<MultilinearForm> {
    let Some(degree) = f.multidegree() else {
        if f.is_zero() {
            return Ok(MultilinearForm {
                degree: MultiDegree::zero(),
                slots: Vec::new(),
                poly: JPoly::zero(),
            });
        }
        return Err(Error::NotHomogeneous);
    };
    if degree.total() > 255 {
        return Err(Error::ResourceCap("more than 255 slots".into()));
    }
    let slots: Vec<u32> = degree.counts().to_vec();
    let offsets: Vec<usize> = slots
        .iter()
        .scan(0usize, |acc, &n| {
            let o = *acc;
            *acc += n as usize;
            Some(o)
        })
        .collect();
    let mut poly = JPoly::zero();
    for (t, c) in f.iter() {
        let leaves = t.leaves();
        let mut positions: Vec<Vec<usize>> = vec![Vec::new(); slots.len()];
        for (p, g) in leaves.iter().enumerate() {
            positions[g.index()].push(p);
        }
        let per_var = slots.iter().zip(&offsets).map(|(&n, &o)| (o..o + n as usize).permutations(n as usize));
        for choice in per_var.multi_cartesian_product() {
            let mut images = vec![JTerm::leaf(Generator(0)); leaves.len()];
            for (var, perm) in choice.iter().enumerate() {
                for (&pos, &slot) in positions[var].iter().zip(perm) {
                    images[pos] = JTerm::leaf(Generator(slot as u8));
                }
            }
            poly.add_term(t.substitute_positions(&images), c.clone());
        }
    }
    Ok(MultilinearForm {
        degree,
        slots,
        poly,
    })
}

/// Span of the T-ideal generated by some polynomials inside one component.
#[derive(Clone, Debug)]
pub struct TComponent {
    /// Independent instance classes in quotient coordinates.
    pub cert: SubspaceCert,
    /// Which substitution produced each vector.
    pub labels: Vec<String>,
    /// Number of instances generated, before reduction.
    pub instances: usize,
    /// Whether every vector lies in the kernel of `γ`, checked exactly.
    pub in_s_space: bool,
    pub s_dim: usize,
}

fn assignment_label(name: &str, form: &MultilinearForm, images: &[JTerm]) -> String {
    let parts: Vec<String> = form
        .slots
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(i, &n)| {
            let o = form.offset(i);
            let ims: Vec<String> = images[o..o + n as usize].iter().map(|t| t.to_string()).collect();
            format!("{}->{}", Generator(i as u8), ims.join(","))
        })
        .collect();
    format!("{name}[{}]", parts.join("; "))
}

/// Every way to fill the slots with monomials of total multidegree `d`,
/// taking a multiset of monomials per variable.
fn slot_fillings(form: &MultilinearForm, monomials: &[JTerm], d: &MultiDegree) -> Vec<Vec<JTerm>> {
    let degrees: Vec<MultiDegree> = monomials.iter().map(|m| m.multidegree()).collect();
    let vars: Vec<usize> = (0..form.slots.len()).filter(|&i| form.slots[i] > 0).collect();
    let total_slots: u32 = form.slots.iter().sum();
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        form: &MultilinearForm,
        vars: &[usize],
        degrees: &[MultiDegree],
        budget: MultiDegree,
        slots_left: u32,
        vi: usize,
        filled: u32,
        min: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if vi == vars.len() {
            if budget.is_zero() {
                out.push(current.clone());
            }
            return;
        }
        if budget.total() < slots_left {
            return;
        }
        let n = form.slots[vars[vi]];
        if filled == n {
            rec(form, vars, degrees, budget, slots_left, vi + 1, 0, 0, current, out);
            return;
        }
        for k in min..degrees.len() {
            if let Some(rest) = budget.checked_sub(&degrees[k]) {
                current.push(k);
                rec(form, vars, degrees, rest, slots_left - 1, vi, filled + 1, k, current, out);
                current.pop();
            }
        }
    }
    let mut picks = Vec::new();
    rec(form, &vars, &degrees, d.clone(), total_slots, 0, 0, 0, &mut current, &mut picks);
    for p in picks {
        // picks are listed variable by variable, matching slot order
        let mut images = vec![JTerm::leaf(Generator(0)); total_slots as usize];
        let mut it = p.into_iter();
        for &v in &vars {
            let o = form.offset(v);
            for k in 0..form.slots[v] as usize {
                images[o + k] = monomials[it.next().unwrap()].clone();
            }
        }
        out.push(images);
    }
    out
}

/// A basis of the span of `vectors`, chosen among them, with labels. The
/// choice is made modulo a prime; every vector left out is then shown to lie
/// in the span of the chosen ones by an exact solve, so the dimension is
/// exact.
fn independent(vectors: Vec<Vec<Rational>>, labels: Vec<String>, dim: usize) -> Result<(Vec<Vec<Rational>>, Vec<String>)> {
    if vectors.is_empty() {
        return Ok((vectors, labels));
    }
    let keep = default_primes()
        .into_iter()
        .find_map(|p| pivot_rows_mod(&vectors, dim, p))
        .ok_or_else(|| Error::Reconstruction("no usable prime for an independent subset".into()))?;
    let mut chosen = vec![false; vectors.len()];
    for &i in &keep {
        chosen[i] = true;
    }
    let mut basis: Vec<Vec<Rational>> = keep.iter().map(|&i| vectors[i].clone()).collect();
    let mut names: Vec<String> = keep.iter().map(|&i| labels[i].clone()).collect();
    for (i, v) in vectors.into_iter().enumerate() {
        if chosen[i] || basis.len() == dim {
            continue;
        }
        if exact_solve(&basis, &v)?.is_none() {
            basis.push(v);
            names.push(labels[i].clone());
        }
    }
    Ok((basis, names))
}

/// Span of all substitution instances of `gens` (with monomial contexts when
/// an instance has smaller multidegree) in the component at `d`.
pub fn t_component(engine: &mut Engine, gens: &[(String, JPoly)], d: &MultiDegree) -> Result<TComponent> {
    let forms: Vec<(String, MultilinearForm)> = gens
        .iter()
        .map(|(n, g)| Ok((n.clone(), multilinearize(g)?)))
        .collect::<Result<_>>()?;
    let gens_text: Vec<String> = gens.iter().map(|(n, g)| format!("{n}={g}")).collect();
    let key = format!("tideal:{}:{}", d.to_csv(), digest(gens_text.join("\n").as_bytes()));
    let space = engine.space(d)?;
    let mut cached = None;
    if let Some(cache) = engine.config.cache.clone() {
        match cache.load::<StoredSpan>(&key)? {
            Lookup::Hit(s) => {
                let corrupt = |reason: &str| Error::CacheCorrupt {
                    path: cache.path_for(&key).display().to_string(),
                    reason: reason.into(),
                };
                if s.vectors.len() != s.labels.len() || s.vectors.len() > space.quotient_dim() {
                    return Err(corrupt("span shape differs"));
                }
                let mut vectors = Vec::with_capacity(s.vectors.len());
                for sparse in &s.vectors {
                    let mut v = vec![Rational::zero(); space.quotient_dim()];
                    for (i, q) in sparse {
                        *v.get_mut(*i as usize).ok_or_else(|| corrupt("coordinate out of range"))? = parse_rat(q)?;
                    }
                    vectors.push(v);
                }
                engine.stats.cache_hits += 1;
                cached = Some((vectors, s.labels, s.instances));
            }
            Lookup::Stale { path, found } => engine.stats.warnings.push(format!(
                "discarding cache file {} written by format version {found}",
                path.display()
            )),
            Lookup::Miss => {}
        }
    }
    let (vectors, labels, instances) = match cached {
        Some(c) => c,
        None => {
            let mut memo: HashMap<MultiDegree, Span> = HashMap::new();
            let span = span_at(engine, &forms, d, &mut memo)?;
            if let Some(cache) = &engine.config.cache {
                let stored = StoredSpan {
                    vectors: span.0.iter().map(|v| sparse_strings(v)).collect(),
                    labels: span.1.clone(),
                    instances: span.2,
                };
                cache.store(&key, &stored)?;
            }
            span
        }
    };
    let in_s_space = vectors.iter().all(|v| space.gamma_of(v).is_zero());
    let dimension = vectors.len();
    let s_dim = space.s_dim();
    Ok(TComponent {
        cert: SubspaceCert {
            degree: d.clone(),
            dimension,
            vectors,
            certificates: Vec::new(),
        },
        labels,
        instances,
        in_s_space,
        s_dim,
    })
}

type Span = (Vec<Vec<Rational>>, Vec<String>, usize);

#[derive(Serialize, Deserialize)]
struct StoredSpan {
    vectors: Vec<Vec<(u32, String)>>,
    labels: Vec<String>,
    instances: usize,
}

fn span_at(
    engine: &mut Engine,
    forms: &[(String, MultilinearForm)],
    d: &MultiDegree,
    memo: &mut HashMap<MultiDegree, Span>,
) -> Result<Span> {
    if let Some(s) = memo.get(d) {
        return Ok(s.clone());
    }
    let space = engine.space(d)?;
    let q = space.quotient_dim();
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    let mut instances = 0;
    let min_total = forms.iter().map(|(_, f)| f.degree.total()).min().unwrap_or(u32::MAX);
    if d.total() < min_total {
        memo.insert(d.clone(), (vectors.clone(), labels.clone(), 0));
        return Ok((vectors, labels, 0));
    }
    let mut monomials = Vec::new();
    for e in d.sub_degrees() {
        monomials.extend(engine.terms(&e)?.terms.iter().cloned());
    }
    monomials.sort();
    for (name, form) in forms {
        if form.poly.is_zero() || form.degree.total() > d.total() {
            continue;
        }
        for images in slot_fillings(form, &monomials, d) {
            instances += 1;
            let inst = form.substitute_monomials(&images);
            let v = space.coordinates(&inst)?;
            if v.iter().any(|c| !c.is_zero()) {
                vectors.push(v);
                labels.push(assignment_label(name, form, &images));
            }
        }
    }
    // contexts: classes at smaller multidegrees times monomials
    for e in d.sub_degrees() {
        if e == *d || e.total() < min_total {
            continue;
        }
        let (lower, lower_labels, _) = span_at(engine, forms, &e, memo)?;
        if lower.is_empty() {
            continue;
        }
        let lower_space = engine.space(&e)?;
        let rest = d.checked_sub(&e).unwrap();
        let mults = engine.terms(&rest)?;
        for (v, l) in lower.iter().zip(&lower_labels) {
            let p = lower_space.from_coordinates(v);
            for m in &mults.terms {
                let w = space.coordinates(&jmul(&p, &JPoly::monomial(m.clone())))?;
                instances += 1;
                if w.iter().any(|c| !c.is_zero()) {
                    vectors.push(w);
                    labels.push(format!("({l})*{m}"));
                }
            }
        }
    }
    let (vectors, labels) = independent(vectors, labels, q)?;
    memo.insert(d.clone(), (vectors.clone(), labels.clone(), instances));
    Ok((vectors, labels, instances))
}

/// Outcome of a membership test with its certificate.
#[derive(Clone, Debug)]
pub struct Membership {
    pub degree: MultiDegree,
    pub member: bool,
    pub component: TComponent,
    pub certificate: Option<Certificate>,
}

/// Whether `f` lies in the T-ideal of `gens` at its multidegree; when it
/// does, the certificate expresses its class over the component basis and
/// has been re-verified exactly.
pub fn t_membership(engine: &mut Engine, f: &JPoly, gens: &[(String, JPoly)]) -> Result<Membership> {
    let d = f.multidegree().ok_or(Error::NotHomogeneous)?;
    let component = t_component(engine, gens, &d)?;
    let target = engine.space(&d)?.coordinates(f)?;
    let certificate = exact_solve(&component.cert.vectors, &target)?.map(|coefficients| Certificate {
        label: "f".into(),
        target,
        coefficients,
    });
    if let Some(c) = &certificate {
        if !c.holds(&component.cert.vectors) {
            return Err(Error::PropertyViolated("membership certificate does not verify".into()));
        }
    }
    Ok(Membership {
        degree: d,
        member: certificate.is_some(),
        component,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magma::jpow;
    use crate::int;

    fn x() -> JPoly {
        JPoly::generator(Generator::X)
    }
    fn y() -> JPoly {
        JPoly::generator(Generator::Y)
    }

    #[test]
    fn multilinearize_examples() {
        let m = multilinearize(&jmul(&x(), &x())).unwrap();
        let expect = jmul(&JPoly::generator(Generator(0)), &JPoly::generator(Generator(1))).scale_int(2);
        assert_eq!(m.poly, expect);
        let f = jmul(&jmul(&x(), &x()), &y());
        let m = multilinearize(&f).unwrap();
        let x1x2 = jmul(&JPoly::generator(Generator(0)), &JPoly::generator(Generator(1)));
        assert_eq!(m.poly, jmul(&x1x2, &JPoly::generator(Generator(2))).scale_int(2));
        assert_eq!(m.restitute(), f.scale_int(2));
        let g = &jpow(&x(), 3) - &jmul(&jmul(&x(), &y()), &x());
        assert!(matches!(multilinearize(&g), Err(Error::NotHomogeneous)));
    }

    #[test]
    fn jordan_identity_generates_its_component() {
        let mut e = Engine::default();
        let x2 = jmul(&x(), &x());
        let jordan = &jmul(&jmul(&x2, &y()), &x()) - &jmul(&x2, &jmul(&y(), &x()));
        // the identity is zero in J, so its T-ideal component is trivial
        let gens = vec![("j".to_string(), jordan.clone())];
        let t = t_component(&mut e, &gens, &MultiDegree::new(vec![3, 1])).unwrap();
        assert_eq!(t.cert.dimension, 0);
        let m = t_membership(&mut e, &jordan, &gens).unwrap();
        assert!(m.member);
        assert_eq!(m.certificate.unwrap().coefficients.len(), 0);
        let m = t_membership(&mut e, &jmul(&x(), &y()), &gens).unwrap();
        assert!(!m.member);
    }

    #[test]
    fn contexts_reach_larger_degrees() {
        // x•y generates everything of degree ≥ 2 containing x and y
        let mut e = Engine::default();
        let gens = vec![("p".to_string(), jmul(&x(), &y()))];
        let d = MultiDegree::new(vec![2, 1]);
        let t = t_component(&mut e, &gens, &d).unwrap();
        assert_eq!(t.cert.dimension, e.space(&d).unwrap().quotient_dim());
        assert!(!t.in_s_space);
        let f = jmul(&jmul(&x(), &y()), &x()).scale(&int(3));
        let m = t_membership(&mut e, &f, &gens).unwrap();
        assert!(m.member);
    }
}
