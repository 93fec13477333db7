fn main() {
    use strip_helmholtz::linalg::*;
    use strip_helmholtz::c64;
    use num_complex::Complex64;
    let n = 7;
    let mut a = CMat::zeros(n, n);
    let mut s = 1234567u64;
    let mut next = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 33) as f64) / (u32::MAX as f64) - 0.5
    };
    for j in 0..n {
        for i in 0..n {
            a[(i, j)] = c64(next(), next());
        }
    }
    let x_true: Vec<Complex64> = (0..n).map(|i| c64(i as f64 + 0.5, -(i as f64))).collect();
    let b = a.matvec(&x_true);
    println!("b = {:?}", &b[0..2]);
    let lu = CLu::factor(&a).unwrap();
    let x = lu.solve(&b);
    // solve for e_j and assemble manually: x_alt = sum_j b_j * A^{-1} e_j
    let mut x_alt = vec![c64(0.0,0.0); n];
    for j in 0..n {
        let mut e = vec![c64(0.0,0.0); n];
        e[j] = c64(1.0, 0.0);
        let col = lu.solve(&e);
        for i in 0..n { x_alt[i] += col[i] * b[j]; }
    }
    println!("x[0]    ={}", x[0]);
    println!("x_alt[0]={}", x_alt[0]);
    println!("true    ={}", x_true[0]);
}
