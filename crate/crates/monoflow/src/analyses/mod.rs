//! The bundled analyses: reaching definitions (`rd`, forward), live
//! variables (`lv`, backward), and constant propagation (`cp`, forward and
//! context-sensitive). Each provides an [`crate::framework::ImplicitFramework`]
//! constructor plus a value renderer for reports.

pub mod constprop;
pub mod liveness;
pub mod reaching;

pub use constprop::{abstract_eval, constant_propagation, CpTransfer, CpValue};
pub use liveness::{live_variables, LvTransfer, LvValue};
pub use reaching::{reaching_definitions, Def, DefSite, RdTransfer, RdValue};

/// Analysis names the command line accepts.
pub const REGISTERED: &[&str] = &["rd", "lv", "cp"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::check_transfer_monotone;
    use crate::lattice::{FlatValue, Lattice, PowersetLattice};
    use crate::simplehal::{build_tagged_flows, load, LabeledProgram};
    use crate::FlowKind;
    use std::collections::BTreeMap;

    const PROGRAMS: &[&str] = &[
        "x := 3; read(y); if x > y then x := x - 1 else y := y - 1",
        "x := 3; y := 4; while x > 1 do (x := x - 1; y := x * y)",
        "proc id(val a, res b) is b := a end x := 1; call id(x, y); x := 2; z := 0; call id(x, z)",
    ];

    fn rd_samples(lp: &LabeledProgram) -> Vec<RdValue> {
        // A spread of subsets of the def-site universe: empty, initial,
        // singletons, and the whole universe.
        let g = build_tagged_flows(lp, false).unwrap();
        let fw = reaching_definitions(lp, &g);
        let top = fw.lattice.top().unwrap();
        let mut out = vec![RdValue::new(), fw.initial.clone(), top.clone()];
        for d in top.iter().take(6) {
            out.push([d.clone()].into());
        }
        out
    }

    #[test]
    fn all_transfers_are_monotone_on_every_block() {
        for src in PROGRAMS {
            let lp = load(src).unwrap();
            let g = build_tagged_flows(&lp, false).unwrap();

            let rd = reaching_definitions(&lp, &g);
            assert!(
                check_transfer_monotone(&rd.lattice, &rd.blocks, &rd.transfer, &rd_samples(&lp))
                    .is_empty()
            );

            let lv = live_variables(&lp, &g);
            let lv_samples = PowersetLattice::new(lp.variables.iter().cloned())
                .elements()
                .unwrap();
            assert!(
                check_transfer_monotone(&lv.lattice, &lv.blocks, &lv.transfer, &lv_samples)
                    .is_empty()
            );

            let cp = constant_propagation(&lp, &g);
            let flats = [
                FlatValue::Bottom,
                FlatValue::Const(1),
                FlatValue::Const(2),
                FlatValue::Top,
            ];
            // The full map space explodes; vary one variable at a time over
            // an all-⊥ and an all-⊤ base.
            let mut cp_samples: Vec<CpValue> = vec![cp.lattice.bottom(), cp.initial.clone()];
            for var in &lp.variables {
                for base in [FlatValue::Bottom, FlatValue::Top] {
                    for v in flats {
                        let mut m: CpValue = lp
                            .variables
                            .iter()
                            .map(|x| (x.clone(), base))
                            .collect::<BTreeMap<_, _>>();
                        m.insert(var.clone(), v);
                        cp_samples.push(m);
                    }
                }
            }
            assert!(
                check_transfer_monotone(&cp.lattice, &cp.blocks, &cp.transfer, &cp_samples)
                    .is_empty()
            );
        }
    }

    #[test]
    fn gen_kill_analyses_are_distributive() {
        for src in PROGRAMS {
            let lp = load(src).unwrap();
            let g = build_tagged_flows(&lp, false).unwrap();

            let rd = reaching_definitions(&lp, &g);
            let samples = rd_samples(&lp);
            for (label, block) in &rd.blocks {
                for kind in [FlowKind::Normal, FlowKind::Call, FlowKind::Return] {
                    for a in &samples {
                        for b in &samples {
                            let f = |v: &RdValue| {
                                crate::framework::Transfer::apply(
                                    &rd.transfer,
                                    *label,
                                    block,
                                    kind,
                                    v,
                                )
                            };
                            assert_eq!(
                                f(&rd.lattice.join(a, b)),
                                rd.lattice.join(&f(a), &f(b)),
                                "rd not distributive at {label}"
                            );
                        }
                    }
                }
            }

            let lv = live_variables(&lp, &g);
            let lv_samples = PowersetLattice::new(lp.variables.iter().cloned())
                .elements()
                .unwrap();
            for (label, block) in &lv.blocks {
                for a in &lv_samples {
                    for b in &lv_samples {
                        let f = |v: &LvValue| {
                            crate::framework::Transfer::apply(
                                &lv.transfer,
                                *label,
                                block,
                                FlowKind::Normal,
                                v,
                            )
                        };
                        assert_eq!(
                            f(&lv.lattice.join(a, b)),
                            lv.lattice.join(&f(a), &f(b)),
                            "lv not distributive at {label}"
                        );
                    }
                }
            }
        }
    }
}
