//! Serialization of clause sets, interpretations, resolving functions and
//! explicit systems.

pub mod clauses;
pub mod values;

pub use clauses::{clauses_from_json, clauses_to_json, emit_text, parse_text, parse_var_name, ClauseSetJson};
pub use values::{
    domains_from_json, domains_to_json, interpretation_from_json, interpretation_to_json, psi_from_json, psi_to_json,
    system_from_json, system_to_json, value_from_json, value_to_json, DomainsJson, FiniteSystemJson,
    InterpretationJson, PsiJson,
};
