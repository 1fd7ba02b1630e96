use std::fmt;

use super::{StabilizerError, StabilizerGroup};
use crate::linalg::ExactPhase;

/// A one-dimensional representation `λ: G → U(1)`, stored per element index
/// of the group it was built for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    values: Vec<ExactPhase>,
    generator_values: Vec<ExactPhase>,
}

impl Character {
    /// Extends generator values multiplicatively along the Cayley graph and
    /// checks every edge, which covers every defining relation of `G`.
    pub fn from_generators(group: &StabilizerGroup, gen_values: &[ExactPhase]) -> Result<Self, StabilizerError> {
        group.require_abelian()?;
        let k = group.generators().len();
        if gen_values.len() != k {
            return Err(StabilizerError::GeneratorCountMismatch { expected: k, found: gen_values.len() });
        }
        let mut values: Vec<Option<ExactPhase>> = vec![None; group.order()];
        values[0] = Some(ExactPhase::ONE);
        // closure was breadth-first, so every element is reached from a lower index
        for e in 0..group.order() {
            let v = values[e].expect("elements are visited in closure order");
            for (g, &lam) in gen_values.iter().enumerate() {
                let t = group.times_generator(e, g);
                let w = v * lam;
                match values[t] {
                    None => values[t] = Some(w),
                    Some(prev) if prev != w => {
                        return Err(StabilizerError::InconsistentCharacter(format!(
                            "{} would need eigenvalue {prev} and {w}",
                            group.element(t)
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(Self {
            values: values.into_iter().map(|v| v.expect("closure is connected")).collect(),
            generator_values: gen_values.to_vec(),
        })
    }

    /// The trivial character `λ ≡ 1`.
    pub fn trivial(group: &StabilizerGroup) -> Self {
        Self {
            values: vec![ExactPhase::ONE; group.order()],
            generator_values: vec![ExactPhase::ONE; group.generators().len()],
        }
    }

    /// All `|G|` characters of an Abelian group.
    ///
    /// Generators are adjoined one at a time. If `r` is the least power with
    /// `g^r` already in the subgroup `H` built so far, the admissible values
    /// of `λ(g)` are the `r` roots of `λ(g^r)`, and each extends to the cosets
    /// `H·g^j`, `j < r`.
    pub fn all(group: &StabilizerGroup) -> Result<Vec<Self>, StabilizerError> {
        group.require_abelian()?;
        let mut out = Vec::with_capacity(group.order());
        let mut values = vec![None; group.order()];
        values[0] = Some(ExactPhase::ONE);
        extend(group, 0, &mut values, &mut vec![0], &mut Vec::new(), &mut out);
        Ok(out)
    }

    pub fn value(&self, element: usize) -> ExactPhase {
        self.values[element]
    }

    pub fn values(&self) -> &[ExactPhase] {
        &self.values
    }

    pub fn generator_values(&self) -> &[ExactPhase] {
        &self.generator_values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(ExactPhase::is_one)
    }
}

fn extend(
    group: &StabilizerGroup,
    k: usize,
    values: &mut Vec<Option<ExactPhase>>,
    members: &mut Vec<usize>,
    chosen: &mut Vec<ExactPhase>,
    out: &mut Vec<Character>,
) {
    if k == group.generators().len() {
        let vals = values.iter().map(|v| v.expect("subgroup is the whole group")).collect();
        out.push(Character { values: vals, generator_values: chosen.clone() });
        return;
    }
    let mut r = 1;
    let mut power = group.times_generator(0, k);
    while values[power].is_none() {
        power = group.times_generator(power, k);
        r += 1;
    }
    let (p, q) = values[power].expect("loop stops at a known value").turns();
    let base_len = members.len();
    for j in 0..r as u64 {
        // (p/q + j)/r turns is an r-th root of λ(g^r)
        let zeta = ExactPhase::from_turns((p + j * q) as i64, q * r as u64);
        for step in 1..r {
            for idx in 0..base_len {
                let prev = members[base_len * (step - 1) + idx];
                let next = group.times_generator(prev, k);
                values[next] = Some(values[prev].expect("coset filled in order") * zeta);
                members.push(next);
            }
        }
        chosen.push(zeta);
        extend(group, k + 1, values, members, chosen, out);
        chosen.pop();
        for idx in members.drain(base_len..) {
            values[idx] = None;
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.generator_values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}
