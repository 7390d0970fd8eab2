use courant_web::{calculate_text, jet_text, kan_grid_text};

#[test]
fn jet_of_volume_form_has_zero_residual() {
    let out = jet_text(r#"{"d": 3, "terms": [{"indices": [1, 2, 3], "coeff": "1"}]}"#).unwrap();
    assert!(out.ends_with("residual       = 0"), "{out}");
}

#[test]
fn jet_rejects_non_closed_form() {
    let err = jet_text(r#"{"d": 4, "terms": [{"indices": [2, 3, 4], "coeff": "x1"}]}"#).unwrap_err();
    assert!(err.contains("dx1*dx2*dx3*dx4"), "{err}");
}

#[test]
fn kan_grid_rows() {
    let out = kan_grid_text(1, 1, 3).unwrap();
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "K(R^1, 1)");
    assert!(rows[1].starts_with("m=1: S"), "{out}");
    assert!(rows[2].starts_with("m=2: B"), "{out}");
    assert!(kan_grid_text(4, 1, 3).is_err());
}

#[test]
fn calculator_operations() {
    assert_eq!(calculate_text(1, "poisson", "p1", "x1").unwrap(), "1");
    assert_eq!(calculate_text(1, "mul", "xi1", "xi1").unwrap(), "0");
    assert_eq!(calculate_text(1, "q", "x1", "").unwrap(), "xi1");
    assert_eq!(calculate_text(1, "d", "x1^2", "").unwrap(), "2*x1*dx1");
    assert!(calculate_text(1, "div", "x1", "x1").is_err());
    assert!(calculate_text(1, "mul", "x1 +", "x1").unwrap_err().starts_with("f:"));
}
