use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use steklov_lab::constants::theorem::threshold_digits as constants_route;
use steklov_lab::bounds::threshold_digits as bounds_route;
use steklov_lab::precision::*;

const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510582097494459";
const LN2_DIGITS: &str = "0.693147180559945309417232121458176568075500134360255254120680009";
const E_DIGITS: &str = "2.71828182845904523536028747135266249775724709369995957496696762";

fn digits_ratio(s: &str) -> BigRational {
    parse_ratio(s).unwrap()
}

fn agree(fixed: &Fixed, reference: &str, places: usize) {
    let got = fixed.to_decimal(places as u32 + 2);
    assert_eq!(&got[..places], &reference[..places], "{got}");
}

#[test]
fn published_digits() {
    let b = Fixed::bits_for_digits(64);
    agree(&Fixed::pi(b), PI_DIGITS, 60);
    agree(&Fixed::ln2(b), LN2_DIGITS, 60);
    agree(&Fixed::from_int(1, b).exp(), E_DIGITS, 60);
    for route in [ConstantRoute::Machin, ConstantRoute::Euler] {
        agree(&route.pi(b), PI_DIGITS, 60);
        agree(&route.ln2(b), LN2_DIGITS, 60);
    }
}

/// The thresholds from the published digits by exact rational division.
#[test]
fn thresholds_from_published_digits() {
    let pi = digits_ratio(PI_DIGITS);
    let ln2 = digits_ratio(LN2_DIGITS);
    let two = BigRational::from_integer(BigInt::from(2));
    let cheeger = &ln2 / (&two * &pi + &ln2);
    let arc = &ln2 / (&two * &pi);
    let c = digits_ratio("0.4");
    let c1 = digits_ratio("0.08");
    let t = constants_route(40, &c, Some(&c1));
    let close = |text: &str, exact: &BigRational| {
        let v = digits_ratio(text);
        let diff = (&v - exact).abs() / exact;
        assert!(diff.to_f64().unwrap() < 1e-38, "{text}");
    };
    close(&t.cheeger_threshold, &cheeger);
    close(&t.arc_threshold, &arc);
    close(&t.assembled, &(&c * &c1 / BigRational::from_integer(BigInt::from(4))));
    assert!(t.cheeger_threshold.starts_with("0.099356958943414486959822632932437249"));
    assert!(t.arc_threshold.starts_with("0.110317800076325796698228216058998845"));
}

#[test]
fn modules_agree_to_the_last_digit() {
    let c = digits_ratio("0.4");
    for digits in [30, 45, 60] {
        let a = constants_route(digits, &c, None);
        let b = bounds_route(digits, &c, None);
        assert_eq!(a, b);
    }
}

#[test]
fn exact_decimal_parsing() {
    assert_eq!(parse_ratio("-1.25e-3").unwrap(), BigRational::new(BigInt::from(-1), BigInt::from(800)));
    assert_eq!(parse_ratio("1e6").unwrap(), BigRational::from_integer(BigInt::from(1_000_000)));
    assert!(parse_ratio("abc").is_none() && parse_ratio("").is_none());
}
