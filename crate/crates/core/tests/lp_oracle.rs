mod common;

use cohere::gambles::{integer, rational};
use cohere::ratlp::{LinearProgram, LpStatus, Relation};
use cohere::sampling::Sampler;
use proptest::prelude::*;

use common::{disagreement, fm_solve};

#[test]
fn oracle_agrees_on_hand_examples() {
    let mut lp = LinearProgram::new(2);
    lp.constrain(vec![integer(1), integer(2)], Relation::Le, integer(1))
        .unwrap();
    lp.constrain(vec![integer(3), integer(1)], Relation::Le, integer(1))
        .unwrap();
    lp.maximize(vec![integer(1), integer(1)]).unwrap();
    let answer = fm_solve(&lp);
    assert_eq!(answer.status, LpStatus::Optimal);
    assert_eq!(answer.value, Some(rational(3, 5)));
    assert_eq!(disagreement(&lp), None);

    let mut lp = LinearProgram::new(1).free(0);
    lp.constrain(vec![integer(1)], Relation::Ge, integer(2))
        .unwrap();
    lp.maximize(vec![integer(-1)]).unwrap();
    assert_eq!(fm_solve(&lp).value, Some(integer(-2)));
    assert_eq!(disagreement(&lp), None);

    let mut lp = LinearProgram::new(1);
    lp.constrain(vec![integer(1)], Relation::Le, integer(-1))
        .unwrap();
    assert_eq!(fm_solve(&lp).status, LpStatus::Infeasible);
    assert_eq!(disagreement(&lp), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solver_matches_fourier_motzkin(seed in any::<u64>()) {
        let lp = common::random_program(&mut Sampler::new(seed));
        prop_assert_eq!(disagreement(&lp), None, "{:?}", lp);
    }
}
