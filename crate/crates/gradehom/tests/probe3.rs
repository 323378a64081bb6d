use std::sync::Arc;

use gradehom::classify::asid_numbers;
use gradehom::constructions::veronese;
use gradehom::field::{FieldSpec, Rat};
use gradehom::{GradedAlgebra, QuiverPresentation};

fn loop_bridge() -> Arc<GradedAlgebra<Rat>> {
    let mut q = QuiverPresentation::new(vec!["1", "2"]);
    let a = q.arrow("a", 0, 0, 1);
    let b = q.arrow("b", 0, 1, 0);
    let c = q.arrow("c", 1, 0, 2);
    q.relation(vec![(1, 1, vec![a, a]), (-1, 1, vec![b, c])]);
    q.monomial_relation(vec![a, b]);
    q.monomial_relation(vec![c, b]);
    q.monomial_relation(vec![c, a]);
    Arc::new(q.compile(FieldSpec::Rationals).unwrap())
}

#[test]
fn probe_veronese_asid() {
    let v = veronese(&loop_bridge(), 2).unwrap();
    let report = asid_numbers(&v, 6).unwrap();
    println!("asid {report:?}");
}
