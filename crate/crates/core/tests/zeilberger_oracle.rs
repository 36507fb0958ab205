//! Telescopers of hypergeometric sums compared against the independent
//! Zeilberger oracle in `common/zeilberger.rs`.

#[path = "common/zeilberger.rs"]
mod zeilberger;

#[test]
fn sums_agree_with_oracle() {
    for (name, uk, un, order) in zeilberger::SUMS {
        if let Err(e) = zeilberger::check(uk, un, order) {
            panic!("{}: {}", name, e);
        }
    }
}
