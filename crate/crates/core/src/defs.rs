//! Definition files: `def NAME = term`, `type NAME = TYPE` and
//! `tdef NAME : TYPE = typedterm`.
//!
//! A definition starts on a line whose first word is one of the keywords and
//! may continue on the following lines. Names are inlined textually at parse
//! time, so later entries may use earlier ones. Terms, type aliases and typed
//! terms live in separate namespaces.

use crate::syntax::{lex, ParseError, Parser, Scope, Tok};
use crate::term::{Name, Term};
use crate::typed::{check, Context, TypedTerm};
use crate::types::Type;

#[derive(Clone, Debug)]
pub enum Item {
    Def {
        name: Name,
        term: Term,
    },
    TypeAlias {
        name: Name,
        ty: Type,
    },
    TDef {
        name: Name,
        claimed: Type,
        witness: TypedTerm,
    },
}

impl Item {
    pub fn name(&self) -> &Name {
        match self {
            Item::Def { name, .. } | Item::TypeAlias { name, .. } | Item::TDef { name, .. } => name,
        }
    }
}

/// A parsed definition file together with the scope it produced.
#[derive(Clone, Debug, Default)]
pub struct Definitions {
    pub items: Vec<Item>,
    pub scope: Scope,
}

impl Definitions {
    pub fn term(&self, name: &str) -> Option<&Term> {
        self.scope.terms.get(name)
    }

    pub fn ty(&self, name: &str) -> Option<&Type> {
        self.scope.types.get(name)
    }

    pub fn typed(&self, name: &str) -> Option<&TypedTerm> {
        self.scope.typed.get(name)
    }

    /// The `(name, claimed type, witness)` triples in file order.
    pub fn tdefs(&self) -> impl Iterator<Item = (&Name, &Type, &TypedTerm)> {
        self.items.iter().filter_map(|i| match i {
            Item::TDef {
                name,
                claimed,
                witness,
            } => Some((name, claimed, witness)),
            _ => None,
        })
    }

    pub fn defs(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.items.iter().filter_map(|i| match i {
            Item::Def { name, term } => Some((name, term)),
            _ => None,
        })
    }
}

fn starts_item(line: &str) -> bool {
    let word = line.split_whitespace().next().unwrap_or("");
    matches!(word, "def" | "tdef" | "type")
}

/// Parses a definition file. Names not defined in the file are looked up in
/// `base` (for instance a prelude).
pub fn parse_definitions(text: &str, base: Option<&Scope>) -> Result<Definitions, ParseError> {
    let mut defs = Definitions {
        items: Vec::new(),
        scope: base.cloned().unwrap_or_default(),
    };
    // group lines into chunks, each starting at a keyword line
    let mut chunks: Vec<(usize, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let code = line.split('#').next().unwrap_or("");
        if starts_item(code) {
            chunks.push((i + 1, line.to_string()));
        } else if code.trim().is_empty() {
            if let Some((_, c)) = chunks.last_mut() {
                c.push('\n');
            }
        } else if let Some((_, c)) = chunks.last_mut() {
            c.push('\n');
            c.push_str(line);
        } else {
            return Err(ParseError {
                line: i + 1,
                col: 1,
                message: "expected `def`, `tdef` or `type`".into(),
            });
        }
    }
    for (line, chunk) in chunks {
        let toks = lex(&chunk, line)?;
        let item = {
            let mut p = Parser::new(toks, &defs.scope);
            let keyword = p.take_ident()?;
            let name = p.take_ident()?;
            let item = match keyword.as_str() {
                "def" => {
                    p.take(Tok::Equals, "`=`")?;
                    let term = p.term(&mut Vec::new())?;
                    Item::Def {
                        name: name.as_str().into(),
                        term,
                    }
                }
                "type" => {
                    p.take(Tok::Equals, "`=`")?;
                    let ty = p.ty(&mut Vec::new(), &[])?;
                    Item::TypeAlias {
                        name: name.as_str().into(),
                        ty,
                    }
                }
                _ => {
                    p.take(Tok::Colon, "`:` and the claimed type")?;
                    let claimed = p.ty(&mut Vec::new(), &[])?;
                    p.take(Tok::Equals, "`=`")?;
                    let witness = p.typed(&mut Vec::new(), &mut Vec::new())?;
                    Item::TDef {
                        name: name.as_str().into(),
                        claimed,
                        witness,
                    }
                }
            };
            p.finish()?;
            item
        };
        match &item {
            Item::Def { name, term } => {
                defs.scope.terms.insert(name.clone(), term.clone());
            }
            Item::TypeAlias { name, ty } => {
                defs.scope.types.insert(name.clone(), ty.clone());
            }
            Item::TDef { name, witness, .. } => {
                defs.scope.typed.insert(name.clone(), witness.clone());
            }
        }
        defs.items.push(item);
    }
    Ok(defs)
}

/// Result of checking one `tdef`.
#[derive(Clone, Debug)]
pub struct TdefCheck {
    pub name: Name,
    pub claimed: Type,
    pub synthesized: Option<Type>,
    /// Whether the erasure matched the same-named `def`; `None` when there is
    /// no such `def`.
    pub erasure_matches: Option<bool>,
    pub error: Option<String>,
}

impl TdefCheck {
    pub fn ok(&self) -> bool {
        self.error.is_none()
            && self.synthesized.as_ref() == Some(&self.claimed)
            && self.erasure_matches != Some(false)
    }

    pub fn line(&self) -> String {
        let verdict = if self.ok() { "ok" } else { "FAILED" };
        let mut s = format!("{} : {} {}", self.name, self.claimed, verdict);
        if let Some(e) = &self.error {
            s.push_str(&format!(" ({e})"));
        } else if let Some(found) = &self.synthesized {
            if found != &self.claimed {
                s.push_str(&format!(" (synthesized {found})"));
            }
        }
        match self.erasure_matches {
            Some(true) => s.push_str(" [erasure matches def]"),
            Some(false) => s.push_str(" [erasure differs from def]"),
            None => {}
        }
        s
    }
}

/// Checks every `tdef` in `defs` against its claimed type. Erasures are
/// compared with the same-named `def` of the file, or of `prelude`.
pub fn check_definitions(defs: &Definitions, prelude: Option<&Scope>) -> Vec<TdefCheck> {
    defs.tdefs()
        .map(|(name, claimed, witness)| {
            let untyped = defs
                .defs()
                .filter(|(n, _)| *n == name)
                .map(|(_, t)| t)
                .last()
                .or_else(|| prelude.and_then(|p| p.terms.get(name)));
            let (synthesized, error) = match check(&Context::new(), witness) {
                Ok(ty) => (Some(ty), None),
                Err(e) => (None, Some(e.to_string())),
            };
            TdefCheck {
                name: name.clone(),
                claimed: claimed.clone(),
                synthesized,
                erasure_matches: untyped.map(|t| *t == witness.erase()),
                error,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r"
# booleans
def T = \x y. x
def F = \x y. y
def pair = \x. x T
   F
type B = forall X. X -> X -> X
tdef T : B = /\X. \x:X. \y:X. x
tdef F : B = /\X. \x:X. \y:X. x
";

    #[test]
    fn parses_items_and_continuations() {
        let d = parse_definitions(SAMPLE, None).unwrap();
        assert_eq!(d.items.len(), 6);
        let pair = d.term("pair").unwrap();
        assert_eq!(pair.to_string(), r"\x.x (\x.\y.x) (\x.\y.y)");
        assert_eq!(d.ty("B").unwrap().to_string(), "forall X. X -> X -> X");
    }

    #[test]
    fn reports_type_and_erasure() {
        let d = parse_definitions(SAMPLE, None).unwrap();
        let checks = check_definitions(&d, None);
        assert!(checks[0].ok(), "{}", checks[0].line());
        // the second witness erases to T, not F
        assert_eq!(checks[1].erasure_matches, Some(false));
        assert!(!checks[1].ok());
    }

    #[test]
    fn wrong_claimed_type_fails() {
        let d = parse_definitions("tdef I : forall X. X = /\\X. \\x:X. x", None).unwrap();
        let c = &check_definitions(&d, None)[0];
        assert!(!c.ok());
        assert!(c.line().contains("synthesized"));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_definitions("def A = \\x.x\ndef B = (A", None).unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_definitions("junk\n", None).unwrap_err();
        assert_eq!(e.line, 1);
    }
}
