//! The --assert mini-grammar: `field op value` evaluated against the fields
//! a command just produced. Numeric fields take every comparison; text
//! fields (verdicts, flags) only equality. A failed check exits with 4.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(x) => write!(f, "{x}"),
            Value::Text(s) => write!(f, "{s}"),
        }
    }
}

/// Field context one command run exposes to its --assert checks.
#[derive(Debug, Default)]
pub struct Context {
    fields: Vec<(String, Value)>,
}

impl Context {
    pub fn push_num(&mut self, name: impl Into<String>, value: f64) {
        self.fields.push((name.into(), Value::Num(value)));
    }

    pub fn push_text(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.fields.push((name.into(), Value::Text(value.into())));
    }

    pub fn push_flag(&mut self, name: impl Into<String>, value: bool) {
        self.push_text(name, if value { "true" } else { "false" });
    }

    fn get(&self, name: &str) -> Option<&Value> {
        self.fields
            .iter()
            .find(|(field, _)| field == name)
            .map(|(_, value)| value)
    }

    fn names(&self) -> String {
        self.fields
            .iter()
            .map(|(field, _)| field.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Le,
    Ge,
    Eq,
    Ne,
    Lt,
    Gt,
}

impl Op {
    fn symbol(self) -> &'static str {
        match self {
            Op::Le => "<=",
            Op::Ge => ">=",
            Op::Eq => "==",
            Op::Ne => "!=",
            Op::Lt => "<",
            Op::Gt => ">",
        }
    }
}

/// Outcome of one check, carrying enough to explain itself.
#[derive(Debug)]
pub struct CheckFailure {
    pub check: String,
    pub actual: String,
}

/// Runs every check against the context. Returns Err(exit-2 style message)
/// on a malformed check, Ok(Some(failure)) on the first check that is false.
pub fn run_checks(checks: &[String], context: &Context) -> Result<Option<CheckFailure>, String> {
    for check in checks {
        let (field, op, rhs) = parse_check(check)?;
        let value = context.get(&field).ok_or_else(|| {
            format!(
                "unknown field '{field}' in check '{check}'; available: {}",
                context.names()
            )
        })?;
        let pass = match value {
            Value::Num(lhs) => {
                let rhs: f64 = rhs.parse().map_err(|_| {
                    format!("field '{field}' is numeric, cannot compare with '{rhs}'")
                })?;
                match op {
                    Op::Le => *lhs <= rhs,
                    Op::Ge => *lhs >= rhs,
                    Op::Eq => *lhs == rhs,
                    Op::Ne => *lhs != rhs,
                    Op::Lt => *lhs < rhs,
                    Op::Gt => *lhs > rhs,
                }
            }
            Value::Text(lhs) => {
                let equal = lhs.eq_ignore_ascii_case(&rhs);
                match op {
                    Op::Eq => equal,
                    Op::Ne => !equal,
                    other => {
                        return Err(format!(
                            "field '{field}' is text; only == and != apply, not {}",
                            other.symbol()
                        ));
                    }
                }
            }
        };
        if !pass {
            return Ok(Some(CheckFailure {
                check: check.clone(),
                actual: format!("{field} = {value}"),
            }));
        }
    }
    Ok(None)
}

fn parse_check(check: &str) -> Result<(String, Op, String), String> {
    // Two-character operators first so "<=" does not parse as "<".
    const OPS: [(&str, Op); 6] = [
        ("<=", Op::Le),
        (">=", Op::Ge),
        ("==", Op::Eq),
        ("!=", Op::Ne),
        ("<", Op::Lt),
        (">", Op::Gt),
    ];
    for (symbol, op) in OPS {
        if let Some(at) = check.find(symbol) {
            let field = check[..at].trim();
            let rhs = check[at + symbol.len()..].trim();
            if field.is_empty() || rhs.is_empty() {
                return Err(format!(
                    "check '{check}' needs the form field {} value",
                    symbol
                ));
            }
            return Ok((field.to_string(), op, rhs.to_string()));
        }
    }
    Err(format!(
        "check '{check}' has no comparison; use one of <=, >=, ==, !=, <, >"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn context() -> Context {
        let mut ctx = Context::default();
        ctx.push_num("risk", 0.0125);
        ctx.push_text("verdict.power", "TENDS_TO_ZERO");
        ctx.push_flag("all_hold", true);
        ctx
    }

    #[test]
    fn numeric_comparisons_evaluate() {
        let ctx = context();
        assert!(run_checks(&["risk<=0.02".into()], &ctx).unwrap().is_none());
        let failed = run_checks(&["risk>0.02".into()], &ctx).unwrap().unwrap();
        assert_eq!(failed.actual, "risk = 0.0125");
    }

    #[test]
    fn text_equality_ignores_case() {
        let ctx = context();
        assert!(
            run_checks(&["verdict.power==tends_to_zero".into()], &ctx)
                .unwrap()
                .is_none()
        );
        assert!(run_checks(&["all_hold==true".into()], &ctx)
            .unwrap()
            .is_none());
    }

    #[test]
    fn text_ordering_is_rejected() {
        let ctx = context();
        let err = run_checks(&["verdict.power<=A".into()], &ctx).unwrap_err();
        assert!(err.contains("only == and !="));
    }

    #[test]
    fn unknown_fields_list_what_exists() {
        let ctx = context();
        let err = run_checks(&["bogus==1".into()], &ctx).unwrap_err();
        assert!(err.contains("risk, verdict.power, all_hold"));
    }

    #[test]
    fn missing_operator_is_flagged() {
        let err = run_checks(&["risk 0.5".into()], &context()).unwrap_err();
        assert!(err.contains("no comparison"));
    }

    #[test]
    fn two_character_operators_win() {
        let ctx = context();
        // "<=" must not parse as "<" with rhs "=0.02".
        assert!(run_checks(&["risk <= 0.02".into()], &ctx).unwrap().is_none());
    }
}
