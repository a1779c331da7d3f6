//! Draw from the scalar samplers and compare sample means with closed forms.

use bayes_cvxclust::distributions::{Gamma, Gig, InverseGamma, InverseGaussian, RngStream};

fn mean(n: usize, mut f: impl FnMut() -> f64) -> f64 {
    (0..n).map(|_| f()).sum::<f64>() / n as f64
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RngStream::new(9, 0);
    let n = 50_000;
    let ig = InverseGaussian::new(2.0, 3.0)?;
    println!(
        "IGauss(2, 3)   sample {:.3} exact {:.3}",
        mean(n, || ig.sample(&mut rng)),
        ig.mu()
    );
    let gig = Gig::new(1.5, 0.5, -0.7)?;
    println!(
        "giG(1.5,0.5,-0.7) sample {:.3} exact {:.3}",
        mean(n, || gig.sample(&mut rng)),
        gig.mean()
    );
    let ga = Gamma::new(3.0, 2.0)?;
    println!(
        "Ga(3, 2)       sample {:.3} exact {:.3}",
        mean(n, || ga.sample(&mut rng)),
        ga.mean()
    );
    let inv = InverseGamma::new(4.0, 6.0)?;
    println!(
        "IG(4, 6)       sample {:.3} exact {:.3}",
        mean(n, || inv.sample(&mut rng)),
        inv.mean()
    );
    Ok(())
}
