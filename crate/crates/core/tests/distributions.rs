mod common;

use common::sampling;

#[test]
fn inverse_gaussian_matches_its_density() {
    sampling::inverse_gaussian_matches_its_density();
}

#[test]
fn gig_matches_its_density() {
    sampling::gig_matches_its_density();
}

#[test]
fn gamma_matches_its_density() {
    sampling::gamma_matches_its_density();
}

#[test]
fn inverse_gamma_matches_its_density() {
    sampling::inverse_gamma_matches_its_density();
}

#[test]
fn horseshoe_augmentation_gives_a_half_cauchy_scale() {
    sampling::horseshoe_augmentation_gives_a_half_cauchy_scale();
}
