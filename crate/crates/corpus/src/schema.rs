//! Strict response schema: `<think>` with six ordered step paragraphs,
//! a narrative summary, then `<answer>`.
//!
//! Validation reports the first failed rule with its byte offset, in a fixed
//! rule order, so rejections are reproducible and testable. Accepted
//! responses parse into their step texts, summary, and answer payload;
//! canonical serialization reproduces canonically formatted responses
//! byte-exactly.

use std::fmt;

use serde::{Deserialize, Serialize};

pub use ecglab_protocol::STEP_HEADERS;

/// Why a response was rejected. `step` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum SchemaRule {
    MissingThinkOpen,
    ContentBeforeThink,
    MissingThinkClose,
    TagOrder,
    MissingAnswerOpen,
    MissingAnswerClose,
    EmptyThink,
    EmptyNarrative,
    EmptyAnswer,
    MissingStepHeader { step: usize },
    StepOutOfOrder { step: usize },
    EmptyStepBody { step: usize },
    ListMarker { step: usize },
    BlankLineInStep { step: usize },
}

impl fmt::Display for SchemaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaRule::MissingThinkOpen => write!(f, "missing <think> block"),
            SchemaRule::ContentBeforeThink => write!(f, "content before <think>"),
            SchemaRule::MissingThinkClose => write!(f, "missing </think>"),
            SchemaRule::TagOrder => write!(f, "tags out of order"),
            SchemaRule::MissingAnswerOpen => write!(f, "missing answer block"),
            SchemaRule::MissingAnswerClose => write!(f, "missing </answer>"),
            SchemaRule::EmptyThink => write!(f, "empty <think> block"),
            SchemaRule::EmptyNarrative => write!(f, "empty narrative between think and answer"),
            SchemaRule::EmptyAnswer => write!(f, "empty answer payload"),
            SchemaRule::MissingStepHeader { step } => write!(f, "missing step {step} header"),
            SchemaRule::StepOutOfOrder { step } => write!(f, "step {step} header out of order"),
            SchemaRule::EmptyStepBody { step } => write!(f, "empty step {step} body"),
            SchemaRule::ListMarker { step } => write!(f, "list marker in step {step}"),
            SchemaRule::BlankLineInStep { step } => write!(f, "blank line inside step {step}"),
        }
    }
}

/// First failed rule plus the byte offset where it was detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaViolation {
    #[serde(flatten)]
    pub rule: SchemaRule,
    pub offset: usize,
}

impl fmt::Display for SchemaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at byte {}", self.rule, self.offset)
    }
}

/// The structured content of an accepted response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParsedResponse {
    pub think_steps: [String; 6],
    pub summary: String,
    /// The `<answer>` payload as written.
    pub answer_payload: String,
    /// Payload split on ';', trimmed, empties dropped.
    pub answer_labels: Vec<String>,
}

const THINK_OPEN: &str = "<think>";
const THINK_CLOSE: &str = "</think>";
const ANSWER_OPEN: &str = "<answer>";
const ANSWER_CLOSE: &str = "</answer>";

fn reject(rule: SchemaRule, offset: usize) -> Result<ParsedResponse, SchemaViolation> {
    Err(SchemaViolation { rule, offset })
}

fn is_list_marker_line(line: &str) -> bool {
    let t = line.trim_start();
    for marker in ["- ", "* ", "+ ", "\u{2022} "] {
        if t.starts_with(marker) {
            return true;
        }
    }
    // Numbered lists: "1. " or "1) ".
    let digits: String = t.chars().take_while(|c| c.is_ascii_digit()).collect();
    if !digits.is_empty() {
        let rest = &t[digits.len()..];
        if rest.starts_with(". ") || rest.starts_with(") ") {
            return true;
        }
    }
    false
}

fn has_internal_blank_line(body: &str) -> bool {
    let mut blank_run = false;
    for line in body.lines().skip(1) {
        if line.trim().is_empty() {
            blank_run = true;
        } else if blank_run {
            return true;
        }
    }
    false
}

/// Validates a raw response and parses its parts.
pub fn validate_response_schema(text: &str) -> Result<ParsedResponse, SchemaViolation> {
    // Tag skeleton.
    let Some(think_open) = text.find(THINK_OPEN) else {
        return reject(SchemaRule::MissingThinkOpen, 0);
    };
    if !text[..think_open].trim().is_empty() {
        let offset = text.len() - text.trim_start().len();
        return reject(SchemaRule::ContentBeforeThink, offset);
    }
    let think_body_start = think_open + THINK_OPEN.len();
    let Some(think_close_rel) = text[think_body_start..].find(THINK_CLOSE) else {
        return reject(SchemaRule::MissingThinkClose, text.len());
    };
    let think_close = think_body_start + think_close_rel;
    if let Some(answer_pos) = text.find(ANSWER_OPEN) {
        if answer_pos < think_close {
            return reject(SchemaRule::TagOrder, answer_pos);
        }
    }
    let after_think = think_close + THINK_CLOSE.len();
    let Some(answer_open_rel) = text[after_think..].find(ANSWER_OPEN) else {
        return reject(SchemaRule::MissingAnswerOpen, text.len());
    };
    let answer_open = after_think + answer_open_rel;
    let payload_start = answer_open + ANSWER_OPEN.len();
    let Some(answer_close_rel) = text[payload_start..].find(ANSWER_CLOSE) else {
        return reject(SchemaRule::MissingAnswerClose, text.len());
    };
    let answer_close = payload_start + answer_close_rel;

    // Block contents.
    let think = &text[think_body_start..think_close];
    if think.trim().is_empty() {
        return reject(SchemaRule::EmptyThink, think_open);
    }
    let narrative = &text[after_think..answer_open];
    if narrative.trim().is_empty() {
        return reject(SchemaRule::EmptyNarrative, after_think);
    }
    let payload = &text[payload_start..answer_close];
    if payload.trim().is_empty() {
        return reject(SchemaRule::EmptyAnswer, payload_start);
    }

    // Step headers, canonical order.
    let mut positions = [0usize; 6];
    for (k, header) in STEP_HEADERS.iter().enumerate() {
        let bold = format!("**{header}**");
        match think.find(&bold) {
            Some(p) => positions[k] = p,
            None => return reject(SchemaRule::MissingStepHeader { step: k + 1 }, think_open),
        }
    }
    for k in 1..6 {
        if positions[k] <= positions[k - 1] {
            return reject(
                SchemaRule::StepOutOfOrder { step: k + 1 },
                think_body_start + positions[k],
            );
        }
    }

    // Step bodies.
    let mut steps: Vec<String> = Vec::with_capacity(6);
    for k in 0..6 {
        let body_start = positions[k] + STEP_HEADERS[k].len() + 4;
        let body_end = if k + 1 < 6 { positions[k + 1] } else { think.len() };
        let raw_body = &think[body_start..body_end];
        let body = raw_body.trim();
        let abs = think_body_start + body_start;
        if body.is_empty() {
            return reject(SchemaRule::EmptyStepBody { step: k + 1 }, abs);
        }
        if has_internal_blank_line(body) {
            return reject(SchemaRule::BlankLineInStep { step: k + 1 }, abs);
        }
        if let Some(line) = body.lines().find(|l| is_list_marker_line(l)) {
            let line_off = body.find(line).unwrap_or(0);
            return reject(SchemaRule::ListMarker { step: k + 1 }, abs + line_off);
        }
        steps.push(body.to_string());
    }

    let answer_payload = payload.trim().to_string();
    let answer_labels: Vec<String> = answer_payload
        .split(';')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if answer_labels.is_empty() {
        return reject(SchemaRule::EmptyAnswer, payload_start);
    }

    Ok(ParsedResponse {
        think_steps: steps.try_into().expect("exactly six steps"),
        summary: narrative.trim().to_string(),
        answer_payload,
        answer_labels,
    })
}

/// Canonical layout: step bodies under bold headers separated by blank
/// lines, narrative, then the answer.
pub fn serialize_response(parsed: &ParsedResponse) -> String {
    let mut out = String::from("<think>\n");
    for (header, body) in STEP_HEADERS.iter().zip(&parsed.think_steps) {
        out.push_str(&format!("**{header}**\n{body}\n\n"));
    }
    out.truncate(out.len() - 1);
    out.push_str(THINK_CLOSE);
    out.push_str("\n\n");
    out.push_str(&parsed.summary);
    out.push_str("\n\n");
    out.push_str(ANSWER_OPEN);
    out.push_str(&parsed.answer_payload);
    out.push_str(ANSWER_CLOSE);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical(bodies: [&str; 6], summary: &str, answer: &str) -> String {
        serialize_response(&ParsedResponse {
            think_steps: bodies.map(str::to_string),
            summary: summary.to_string(),
            answer_payload: answer.to_string(),
            answer_labels: answer.split(';').map(|s| s.trim().to_string()).collect(),
        })
    }

    #[test]
    fn canonical_response_round_trips() {
        let text = canonical(
            ["a one", "b two", "c three", "d four", "e five", "f six"],
            "Summary narrative.",
            "Sinus rhythm; Abnormal ECG",
        );
        let parsed = validate_response_schema(&text).unwrap();
        assert_eq!(parsed.think_steps[0], "a one");
        assert_eq!(parsed.answer_labels, vec!["Sinus rhythm", "Abnormal ECG"]);
        assert_eq!(serialize_response(&parsed), text);
    }

    #[test]
    fn missing_answer_rejected() {
        let text = canonical(["a", "b", "c", "d", "e", "f"], "Sum.", "X");
        let cut = text.split("<answer>").next().unwrap();
        let err = validate_response_schema(cut).unwrap_err();
        assert_eq!(err.rule, SchemaRule::MissingAnswerOpen);
    }

    #[test]
    fn list_marker_rejected() {
        let text = canonical(["a", "- bullet item", "c", "d", "e", "f"], "Sum.", "X");
        let err = validate_response_schema(&text).unwrap_err();
        assert_eq!(err.rule, SchemaRule::ListMarker { step: 2 });
    }

    #[test]
    fn reordered_steps_rejected() {
        let good = canonical(["a", "b", "c", "d", "e", "f"], "Sum.", "X");
        let swapped = good
            .replace("**Step 1: Technical, Rate & Rhythm**", "@@TMP@@")
            .replace(
                "**Step 2: Conduction, Axis & Intervals**",
                "**Step 1: Technical, Rate & Rhythm**",
            )
            .replace("@@TMP@@", "**Step 2: Conduction, Axis & Intervals**");
        let err = validate_response_schema(&swapped).unwrap_err();
        assert_eq!(err.rule, SchemaRule::StepOutOfOrder { step: 2 });
    }

    #[test]
    fn blank_line_in_step_rejected() {
        let text = canonical(["a", "b", "first part\n\nsecond part", "d", "e", "f"], "S.", "X");
        let err = validate_response_schema(&text).unwrap_err();
        assert_eq!(err.rule, SchemaRule::BlankLineInStep { step: 3 });
    }

    #[test]
    fn empty_think_rejected() {
        let err = validate_response_schema("<think>  </think>\n\nS\n\n<answer>X</answer>")
            .unwrap_err();
        assert_eq!(err.rule, SchemaRule::EmptyThink);
    }

    #[test]
    fn answer_before_think_close_rejected() {
        let err =
            validate_response_schema("<think>x<answer>y</answer></think>\n\nS").unwrap_err();
        assert_eq!(err.rule, SchemaRule::TagOrder);
    }

    #[test]
    fn multiline_paragraph_without_blank_lines_accepted() {
        let text = canonical(
            ["line one\nline two wraps", "b", "c", "d", "e", "f"],
            "Sum.",
            "X",
        );
        assert!(validate_response_schema(&text).is_ok());
    }
}
