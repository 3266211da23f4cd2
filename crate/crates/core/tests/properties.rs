mod props;

use props::CASES;

#[test]
fn field_axioms() {
    props::field_axioms(CASES).unwrap();
}

#[test]
fn orbit_stabilizer() {
    props::orbit_stabilizer(CASES).unwrap();
}

#[test]
fn degree_zero() {
    props::degree_zero(CASES).unwrap();
}

#[test]
fn pullback_law() {
    props::pullback_law(CASES).unwrap();
}

#[test]
fn mobius_postcondition() {
    props::mobius_postcondition(CASES).unwrap();
}

#[test]
fn fact3_chords() {
    props::fact3_chords(CASES).unwrap();
}

#[test]
fn function_degrees() {
    props::function_degrees(CASES).unwrap();
}
