//! The modules `F_*` and `F^*` of a functor and the adjunction between them.

use super::{associator, compose_modules, hcomp, left_unitor, right_unitor, Composite, Module, ModuleMorphism};
use crate::error::{Error, Result};
use crate::fincat::FinFunctor;

/// `F_* ⊣ F^*` with unit `hom_A → F^* ∘ F_*` and counit `F_* ∘ F^* → hom_B`.
#[derive(Clone, Debug)]
pub struct AdjunctionWitness {
    pub lower: Module,
    pub upper: Module,
    /// `compose(F_*, F^*)`, the codomain of the unit.
    pub unit_target: Composite,
    /// `compose(F^*, F_*)`, the domain of the counit.
    pub counit_source: Composite,
    pub unit: ModuleMorphism,
    pub counit: ModuleMorphism,
}

/// Builds `F_*(b, a) = hom(b, Fa)` and `F^*(a, b) = hom(Fa, b)`.
pub fn functor_to_modules(f: &FinFunctor) -> Result<AdjunctionWitness> {
    let (a_cat, b_cat) = (f.dom.clone(), f.cod.clone());
    let (ac, bc) = (&a_cat, &b_cat);
    let lower = Module::new(
        a_cat.clone(),
        b_cat.clone(),
        |b, a| bc.hom(b, f.obj_map[a]).len(),
        |beta, a, x| {
            let y = bc.hom(bc.tgt(beta), f.obj_map[a])[x];
            bc.hom_index(bc.compose(y, beta))
        },
        |alpha, b, x| {
            let y = bc.hom(b, f.obj_map[ac.src(alpha)])[x];
            bc.hom_index(bc.compose(f.mor_map[alpha], y))
        },
    )?;
    let upper = Module::new(
        b_cat.clone(),
        a_cat.clone(),
        |a, b| bc.hom(f.obj_map[a], b).len(),
        |alpha, b, x| {
            let y = bc.hom(f.obj_map[ac.tgt(alpha)], b)[x];
            bc.hom_index(bc.compose(y, f.mor_map[alpha]))
        },
        |beta, a, x| {
            let y = bc.hom(f.obj_map[a], bc.src(beta))[x];
            bc.hom_index(bc.compose(beta, y))
        },
    )?;
    let unit_target = compose_modules(&lower, &upper)?;
    let na = a_cat.n_obj();
    let mut components = Vec::with_capacity(na * na);
    for a1 in 0..na {
        for a in 0..na {
            let fa = f.obj_map[a];
            components.push(
                a_cat
                    .hom(a1, a)
                    .iter()
                    .map(|&alpha| {
                        let id = bc.hom_index(bc.idn(fa));
                        unit_target.class(a1, a, fa, id, bc.hom_index(f.mor_map[alpha]))
                    })
                    .collect(),
            );
        }
    }
    let unit = ModuleMorphism { components };
    unit.verify(&Module::identity(a_cat.clone()), &unit_target.module)?;
    let counit_source = compose_modules(&upper, &lower)?;
    let id_b = Module::identity(b_cat.clone());
    let counit = counit_source.induced(&id_b, |b1, b, a, y, x| {
        let fa = f.obj_map[a];
        bc.hom_index(bc.compose(bc.hom(fa, b)[y], bc.hom(b1, fa)[x]))
    })?;
    Ok(AdjunctionWitness { lower, upper, unit_target, counit_source, unit, counit })
}

impl AdjunctionWitness {
    /// The zig-zag on `F_*`, as a morphism `F_* → F_*`.
    pub fn zigzag_lower(&self) -> Result<ModuleMorphism> {
        let (ru_comp, ru) = right_unitor(&self.lower)?;
        let (left, right, assoc) = associator(&self.lower, &self.upper, &self.lower)?;
        let (lu_comp, lu) = left_unitor(&self.lower)?;
        let id = ModuleMorphism::identity(&self.lower);
        let s2 = hcomp(&self.unit, &id, &ru_comp, &right)?;
        let s4 = hcomp(&id, &self.counit, &left, &lu_comp)?;
        let ru_inv = ru.inverse().ok_or_else(|| Error::Internal("unitor not invertible".into()))?;
        let assoc_inv = assoc.inverse().ok_or_else(|| Error::Internal("associator not invertible".into()))?;
        Ok(ru_inv.then(&s2).then(&assoc_inv).then(&s4).then(&lu))
    }

    /// The zig-zag on `F^*`, as a morphism `F^* → F^*`.
    pub fn zigzag_upper(&self) -> Result<ModuleMorphism> {
        let (lu_comp, lu) = left_unitor(&self.upper)?;
        let (left, right, assoc) = associator(&self.upper, &self.lower, &self.upper)?;
        let (ru_comp, ru) = right_unitor(&self.upper)?;
        let id = ModuleMorphism::identity(&self.upper);
        let s2 = hcomp(&id, &self.unit, &lu_comp, &left)?;
        let s4 = hcomp(&self.counit, &id, &right, &ru_comp)?;
        let lu_inv = lu.inverse().ok_or_else(|| Error::Internal("unitor not invertible".into()))?;
        Ok(lu_inv.then(&s2).then(&assoc).then(&s4).then(&ru))
    }

    /// Both triangle identities.
    pub fn check_triangles(&self) -> Result<()> {
        if !self.zigzag_lower()?.is_identity() {
            return Err(Error::InvalidMorphism("triangle identity fails on F_*".into()));
        }
        if !self.zigzag_upper()?.is_identity() {
            return Err(Error::InvalidMorphism("triangle identity fails on F^*".into()));
        }
        Ok(())
    }
}
