//! The guider template is pinned by checksum so accidental edits fail loudly.

use sha2::{Digest, Sha256};

use ecglab_protocol::{compose_guider_prompt, GUIDER_TEMPLATE};

const GUIDER_SHA256: &str = "5fe86cd149683cbef709b04472be53ddf3278ea7770c226ab0ebfbe15fac0978";

fn sha256_hex(data: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(data.as_bytes());
    format!("{:x}", hasher.finalize())
}

#[test]
fn template_checksum_is_pinned() {
    assert_eq!(sha256_hex(GUIDER_TEMPLATE), GUIDER_SHA256);
}

#[test]
fn template_has_exactly_one_of_each_slot() {
    assert_eq!(GUIDER_TEMPLATE.matches("{{report}}").count(), 1);
    assert_eq!(
        GUIDER_TEMPLATE.matches("{{machine_measurements}}").count(),
        1
    );
}

#[test]
fn rendered_output_restores_template_bit_exactly() {
    let p = compose_guider_prompt("R-TEXT-7f3a", "M-TEXT-9c1b").unwrap();
    let restored = p
        .text
        .replace("R-TEXT-7f3a", "{{report}}")
        .replace("M-TEXT-9c1b", "{{machine_measurements}}");
    assert_eq!(sha256_hex(&restored), GUIDER_SHA256);
}
