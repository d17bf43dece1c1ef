//! Built-in named inputs: four toric Laurent polynomials in `X, Y, Z, T`
//! together with their known differential operators, and the Dwork family.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::laurent::{InputFormat, LaurentPolynomial};
use crate::recurrence::Recurrence;

const F24: &str = "T^-1 + Y + T*X^-1 + Z*T*X^-1 + Z*T*X^-1*Y^-1 + Z^-1 + X*Z^-1 \
    + Y*Z^-1*T^-1 + X*Z^-1*T^-1 + X*Y*Z^-1*T^-1 + Y*T^-1 + T*Y^-1 + T*X^-1*Y^-1 \
    + Y*X^-1 + X^-1 + Z*T*Y^-1 + T + Y^-1 + X + X*T^-1 + Z^-1*T^-1 + Z + Z*Y^-1";

const F38: &str = "X*Y^-1 + Z*T*Y^-1 + Z + X + T + X*Z^-1 + Y + Z*X^-1 + Y*Z*X^-1 \
    + X^-1*Z^-1*T^-1 + Y*X^-1*Z^-1*T^-1 + Y*X^-1*T^-1 + Z^-1*T^-1 + Z^-1 + Y^-1*Z^-1 \
    + T*Y^-1 + X*Y^-1*Z^-1 + Y*Z^-1*T^-1 + X^-1*T^-1 + X^-1 + Y^-1 + Y*X^-1 + T^-1";

const F39: &str = "X*Y^-1*Z^-1 + Z*T*X^-1*Y^-1 + Z*T + T + Y*X^-1 + Z*X^-1 + Y*X^-1*T^-1 \
    + Y + X*Y*Z^-1*T^-1 + X*Z^-1 + Y*T^-1 + Z + T^-1 + X + X*Y^-1 + Z*T*Y^-1 \
    + X*Z^-1*T^-1 + Y*Z^-1*T^-1 + X^-1 + Y^-1 + Z*T*X^-1 + T*Y^-1 + Z^-1";

const F41: &str = "X*T + Y*Z + Z*T + Z^-1*T^-1 + T + X^-1*Z^-1 + Y^-1*Z^-1 + X^-1*Y^-1 \
    + X^-1*T^-1 + X*Z*T + Y^-1*T^-1 + Y*Z*T + X^-1*Y^-1*Z^-1 + X^-1*Y^-1*T^-1 \
    + X^-1*Z^-1*T^-1 + Y^-1*Z^-1*T^-1 + X*Y*Z*T + X^-1*Y^-1*Z^-1*T^-1 + Y + X + Z \
    + T^-1 + Z^-1 + X^-1 + Y^-1";

const DWORK4: &str = "X + Y + Z + T + X^-1*Y^-1*Z^-1*T^-1";

pub const NAMES: [&str; 5] = ["24", "38", "39", "41", "dwork4"];

/// Looks up `24`, `38`, `39`, `41` (also with an `f` prefix) or `dwork4`.
pub fn polynomial(name: &str) -> Result<LaurentPolynomial> {
    let text = match name.trim_start_matches('f') {
        "24" => F24,
        "38" => F38,
        "39" => F39,
        "41" => F41,
        "dwork4" | "work4" => DWORK4,
        _ => return Err(Error::UnknownFixture(name.to_string())),
    };
    let h = LaurentPolynomial::read(text, InputFormat::Expr)?;
    // fix the variable order regardless of first appearance
    let order: Vec<usize> = ["X", "Y", "Z", "T"]
        .iter()
        .map(|v| h.variables().iter().position(|w| w == v).expect("all four variables occur"))
        .collect();
    h.permute_variables(&order)
}

/// A theta-polynomial `scale * prod(factors)`, each factor in ascending
/// coefficient order.
struct Factored<'a> {
    scale: i64,
    factors: &'a [&'a [i64]],
}

const fn fac<'a>(scale: i64, factors: &'a [&'a [i64]]) -> Factored<'a> {
    Factored { scale, factors }
}

const T1: &[i64] = &[1, 1];
const T2: &[i64] = &[2, 1];
const T3: &[i64] = &[3, 1];
const T4: &[i64] = &[4, 1];
const THETA: &[i64] = &[0, 1];

fn expand(f: &Factored<'_>, degree: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::from(f.scale)];
    for factor in f.factors {
        let mut next = vec![BigInt::from(0); poly.len() + factor.len() - 1];
        for (i, a) in poly.iter().enumerate() {
            for (j, &b) in factor.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        poly = next;
    }
    poly.resize(degree + 1, BigInt::from(0));
    poly
}

fn build(parts: &[Factored<'_>]) -> Recurrence {
    let polys = parts.iter().map(|f| expand(f, 4)).collect();
    Recurrence::from_polys(polys).expect("fixture operator is well formed")
}

/// The operator annihilating the constant-term series of fixture `name`,
/// as `sum_i z^i P_i(theta)`.
pub fn operator(name: &str) -> Result<Recurrence> {
    let r = match name.trim_start_matches('f') {
        "39" => build(&[
            fac(16, &[&[0, 0, 0, 0, 1]]),
            fac(-4, &[THETA, &[12, 53, 82, 2]]),
            fac(1, &[&[-5120, -18308, -26199, -18410, -4895]]),
            fac(1, &[&[-143808, -430092, -497452, -272424, -60679]]),
            fac(1, &[&[-1478544, -3987101, -4034628, -1870838, -344527]]),
            fac(-1, &[T1, &[7492832, 11226106, 5847783, 1076509]]),
            fac(-2, &[T2, T1, &[5045304, 4249317, 944887]]),
            fac(-3328, &[&[1381, 518], T3, T2, T1]),
            fac(-621920, &[T1, T2, T3, T4]),
        ]),
        "24" => build(&[
            fac(97 * 97, &[&[0, 0, 0, 0, 1]]),
            fac(97, &[THETA, &[-291, -1300, -2018, 1727]]),
            fac(1, &[&[-2709792, -10216234, -16174393, -13428812, -1652135]]),
            fac(1, &[&[-138000348, -443115594, -568639497, -364126194, -81753435]]),
            fac(1, &[&[-3049275024, -8869415520, -10006378570, -5423394464, -1175502862]]),
            fac(1, &[&[-38537290992, -103964102350, -106108023451, -50507429234, -9726250397]]),
            fac(1, &[&[-308040167808, -781527778884, -733053660150, -312374434824, -52762935894]]),
            fac(1, &[&[-1619360309088, -3901093356168, -3399527062044, -1313199235080, -195453433908]]),
            fac(-144, &[T1, &[38959393614, 50808614711, 22487363787, 3432647479]]),
            fac(-432, &[T2, T1, &[14314039440, 10262864555, 1903493629]]),
            fac(-438048, &[&[5992902, 1862987], T3, T2, T1]),
            fac(-368028363456, &[T1, T2, T3, T4]),
        ]),
        "41" => build(&[
            fac(91 * 91, &[&[0, 0, 0, 0, 1]]),
            fac(91, &[THETA, &[-273, -1210, -1874, 782]]),
            fac(1, &[&[-2649920, -9962953, -15227939, -11622522, -2515785]]),
            fac(1, &[&[-110445426, -348819198, -432607868, -258678126, -59827597]]),
            fac(1, &[&[-1915723890, -5439732380, -5901995820, -2998881218, -612043042]]),
            fac(1, &[&[-18479595006, -48522700563, -47503242813, -21226829058, -3762840342]]),
            fac(1, &[&[-110147546634, -271941545379, -244753624741, -98210309094, -15265487382]]),
            fac(1, &[&[-422269162452, -991829482602, -831965057114, -304487632282, -42103272002]]),
            fac(-2, &[T1, &[521254338620, 654332416678, 275108963001, 39253400626]]),
            fac(-1, &[T2, T1, &[799002779040, 545340710193, 94987355417]]),
            fac(-1540, &[&[149264765, 43765159], T3, T2, T1]),
            fac(-4 * 3 * 25 * 49 * 121 * 11971, &[T1, T2, T3, T4]),
        ]),
        "38" => build(&[
            fac(102 * 102, &[&[0, 0, 0, 0, 1]]),
            // printed without the leading theta; the series has a_1 = 0, which
            // forces P_1(0) = 0
            fac(-102, &[THETA, &[204, 911, 1414, 116]]),
            fac(1, &[&[-2663424, -9947652, -14508941, -9892670, -2596259]]),
            fac(1, &[&[-67967496, -206933112, -239004708, -125234088, -25685301]]),
            fac(1, &[&[-598491604, -1608054100, -1587508748, -687051032, -112357900]]),
            fac(1, &[&[-2495389956, -6085656898, -5273754198, -1927713868, -254678692]]),
            fac(1, &[&[-5385015134, -11995897911, -9101625228, -2758627602, -283337071]]),
            fac(1, &[&[-5612134720, -11209872916, -7075746650, -1555791344, -86504770]]),
            fac(12, &[T1, &[-134696600, -51849552, 27844427, 7613560]]),
            fac(1, &[T2, T1, &[595115780, 495871401, 60585089]]),
            fac(-600, &[&[-113205, 10279], T3, T2, T1]),
            fac(-6790000, &[T1, T2, T3, T4]),
        ]),
        "dwork4" | "work4" => build(&[
            fac(1, &[&[0, 0, 0, 0, 1]]),
            fac(0, &[]),
            fac(0, &[]),
            fac(0, &[]),
            fac(0, &[]),
            fac(-3125, &[T1, T2, T3, T4]),
        ]),
        _ => return Err(Error::UnknownFixture(name.to_string())),
    };
    Ok(r)
}

/// The `z`-coefficient of the operator for fixture 38 exactly as printed,
/// `-102 (204 + 911 theta + 1414 theta^2 + 116 theta^3)`.
pub fn operator_38_as_printed() -> Recurrence {
    let mut polys = operator("38").expect("fixture exists").polys().to_vec();
    polys[1] = expand(&fac(-102, &[&[204, 911, 1414, 116]]), 4);
    Recurrence::from_polys(polys).expect("well formed")
}
