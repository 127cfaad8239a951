#![no_main]

use libfuzzer_sys::fuzz_target;
use num_complex::Complex64;

// The expression grammar parses untrusted scenario text. Parsing must never
// panic, and anything that parses must evaluate without panicking (values
// may be non-finite; the field validator rejects those later).
fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        if let Ok(expr) = loewner::expr::parse(src) {
            let _ = expr.eval(Complex64::new(0.3, -0.4), 1.7);
            let _ = expr.eval(Complex64::new(0.0, 0.0), 0.0);
            let _ = expr.depends_on_z();
        }
    }
});
