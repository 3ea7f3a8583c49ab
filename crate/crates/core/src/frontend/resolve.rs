//! Turns parsed compilation units into a [`Project`]: assigns qualified
//! names, folds nested types, resolves type references and builds the
//! per-function field/call sets used by LCOM4.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::ops::Range;

use crate::diagnostic::Diagnostic;
use crate::model::{ClassNode, FunctionNode, PackageNode, Project, DEFAULT_PACKAGE};

use super::body::{scan_body, CallSite};
use super::config::ExtractionConfig;
use super::lexer::Token;
use super::parser::{CompilationUnit, FunctionDecl, Import, TypeDecl, TypeOrigin};
use super::source::SourceFile;

pub(crate) struct ParsedFile {
    pub source: SourceFile,
    pub unit: CompilationUnit,
}

/// One class-to-be: a top-level type, or a member type when nested types
/// are not folded.
struct Plan<'a> {
    file: usize,
    decl: &'a TypeDecl,
    qualified: String,
    package: String,
    top: &'a TypeDecl,
    top_key: String,
}

/// A type declaration whose members are merged into a class.
struct Scope<'a> {
    decl: &'a TypeDecl,
    prefix: String,
    parent: Option<usize>,
}

fn qualify(package: &str, name: &str) -> String {
    if package.is_empty() {
        name.to_string()
    } else {
        format!("{package}.{name}")
    }
}

pub(crate) fn build_project(
    name: &str,
    files: &[ParsedFile],
    config: &ExtractionConfig,
    diagnostics: &mut Vec<Diagnostic>,
) -> Project {
    // type name (qualified, incl. nested) -> owning class qualified name
    let mut registry: HashMap<String, String> = HashMap::new();
    let mut plans: Vec<Plan> = Vec::new();

    for (file_index, file) in files.iter().enumerate() {
        let package = file.unit.package.clone().unwrap_or_default();
        for top in &file.unit.types {
            let key = qualify(&package, &top.name);
            if registry.contains_key(&key) {
                diagnostics.push(
                    Diagnostic::warning(format!(
                        "class `{key}` is declared more than once; keeping the first declaration"
                    ))
                    .at(&file.source.path, top.start_line),
                );
                continue;
            }
            registry.insert(key.clone(), key.clone());
            plans.push(Plan {
                file: file_index,
                decl: top,
                qualified: key.clone(),
                package: package.clone(),
                top,
                top_key: key.clone(),
            });
            register_members(
                top,
                &key,
                &key,
                config.fold_nested_classes,
                &mut registry,
                &mut |decl, qualified| {
                    plans.push(Plan {
                        file: file_index,
                        decl,
                        qualified,
                        package: package.clone(),
                        top,
                        top_key: key.clone(),
                    })
                },
            );
        }
    }

    let project_packages: HashSet<String> = plans.iter().map(|p| p.package.clone()).collect();
    for file in files {
        warn_unresolved_imports(file, &registry, &project_packages, diagnostics);
    }

    let mut packages: BTreeMap<String, Vec<ClassNode>> = BTreeMap::new();
    let mut ambiguous: BTreeSet<(usize, String)> = BTreeSet::new();
    for plan in &plans {
        let file = &files[plan.file];
        let node = build_class(plan, file, &registry, config, &mut ambiguous);
        let package = if plan.package.is_empty() {
            DEFAULT_PACKAGE.to_string()
        } else {
            plan.package.clone()
        };
        packages.entry(package).or_default().push(node);
    }
    for (file_index, name) in ambiguous {
        diagnostics.push(
            Diagnostic::info(format!(
                "`{name}` matches more than one wildcard import; reference dropped"
            ))
            .at(&files[file_index].source.path, 1),
        );
    }

    let mut project = Project::new(name, "");
    for (name, mut classes) in packages {
        classes.sort_by(|a, b| a.qualified_name.cmp(&b.qualified_name));
        project.packages.push(PackageNode { name, classes });
    }
    project
}

fn register_members<'a>(
    decl: &'a TypeDecl,
    key: &str,
    owner: &str,
    fold: bool,
    registry: &mut HashMap<String, String>,
    on_class: &mut dyn FnMut(&'a TypeDecl, String),
) {
    for nested in decl.nested.iter().filter(|n| n.origin == TypeOrigin::Member) {
        let nested_key = format!("{key}.{}", nested.name);
        let nested_owner = if fold {
            owner.to_string()
        } else {
            nested_key.clone()
        };
        if registry.contains_key(&nested_key) {
            continue;
        }
        registry.insert(nested_key.clone(), nested_owner.clone());
        if !fold {
            on_class(nested, nested_key.clone());
        }
        register_members(nested, &nested_key, &nested_owner, fold, registry, on_class);
    }
}

fn warn_unresolved_imports(
    file: &ParsedFile,
    registry: &HashMap<String, String>,
    project_packages: &HashSet<String>,
    diagnostics: &mut Vec<Diagnostic>,
) {
    for import in file.unit.imports.iter().filter(|i| !i.is_static && !i.wildcard) {
        if registry.contains_key(&import.path) {
            continue;
        }
        let Some((container, _)) = import.path.rsplit_once('.') else {
            continue;
        };
        if project_packages.contains(container) || registry.contains_key(container) {
            diagnostics.push(
                Diagnostic::warning(format!(
                    "import `{}` does not resolve to an analyzed class; references to it are dropped",
                    import.path
                ))
                .at(&file.source.path, import.line),
            );
        }
    }
}

/// Collects the scopes merged into a class, plus the member types that are
/// split out as classes of their own.
fn compose<'a>(root: &'a TypeDecl, fold: bool) -> (Vec<Scope<'a>>, Vec<&'a TypeDecl>) {
    let mut scopes = vec![Scope {
        decl: root,
        prefix: String::new(),
        parent: None,
    }];
    let mut split_out = Vec::new();
    // (scope index, whether the scope is reachable through member types only)
    let mut stack = vec![(0usize, true)];
    while let Some((index, member_chain)) = stack.pop() {
        let decl = scopes[index].decl;
        let mut counter = 0;
        for nested in &decl.nested {
            let is_member = nested.origin == TypeOrigin::Member;
            if is_member && member_chain && !fold {
                split_out.push(nested);
                continue;
            }
            let segment = match nested.origin {
                TypeOrigin::Member => nested.name.clone(),
                TypeOrigin::Anonymous => {
                    counter += 1;
                    format!("${counter}")
                }
                TypeOrigin::Local => {
                    counter += 1;
                    format!("${counter}{}", nested.name)
                }
            };
            let prefix = format!("{}{segment}.", scopes[index].prefix);
            scopes.push(Scope {
                decl: nested,
                prefix,
                parent: Some(index),
            });
            stack.push((scopes.len() - 1, member_chain && is_member));
        }
    }
    (scopes, split_out)
}

fn arity_matches(function: &FunctionDecl, arity: usize) -> bool {
    let n = function.param_types.len();
    let varargs = function
        .param_types
        .last()
        .is_some_and(|t| t.ends_with("..."));
    n == arity || (varargs && arity + 1 >= n)
}

fn build_class(
    plan: &Plan,
    file: &ParsedFile,
    registry: &HashMap<String, String>,
    config: &ExtractionConfig,
    ambiguous: &mut BTreeSet<(usize, String)>,
) -> ClassNode {
    let tokens = &file.source.tokens;
    let (scopes, split_out) = compose(plan.decl, config.fold_nested_classes);
    let mut class = ClassNode::new(plan.qualified.clone(), plan.decl.kind);

    // fields
    let mut field_ids: Vec<HashMap<&str, String>> = Vec::with_capacity(scopes.len());
    let mut seen_fields = HashSet::new();
    for scope in &scopes {
        let mut ids = HashMap::new();
        for field in &scope.decl.fields {
            let id = format!("{}{}", scope.prefix, field.name);
            if seen_fields.insert(id.clone()) {
                class.fields.push(id.clone());
            }
            ids.insert(field.name.as_str(), id);
        }
        field_ids.push(ids);
    }

    // function keys
    let mut keys: Vec<Vec<String>> = Vec::with_capacity(scopes.len());
    let mut seen_keys = HashSet::new();
    for scope in &scopes {
        let mut scope_keys = Vec::new();
        for function in &scope.decl.functions {
            let base = format!("{}{}", scope.prefix, function.signature());
            let mut key = base.clone();
            let mut n = 2;
            while !seen_keys.insert(key.clone()) {
                key = format!("{base}#{n}");
                n += 1;
            }
            scope_keys.push(key);
        }
        keys.push(scope_keys);
    }

    for (s, scope) in scopes.iter().enumerate() {
        for (f, function) in scope.decl.functions.iter().enumerate() {
            let mut node = if function.is_constructor {
                FunctionNode::constructor(keys[s][f].clone())
            } else {
                FunctionNode::new(keys[s][f].clone())
            };
            if let Some(body) = &function.body {
                let skip: Vec<Range<usize>> =
                    scope.decl.nested.iter().map(|n| n.tokens.clone()).collect();
                let facts = scan_body(tokens, body.clone(), &skip, &function.param_names);
                for name in &facts.field_uses {
                    if let Some(id) = lookup_field(&scopes, &field_ids, s, name) {
                        node.accessed_fields.insert(id);
                    }
                }
                for call in &facts.calls {
                    node.called_functions
                        .extend(lookup_calls(&scopes, &keys, s, call));
                }
            }
            // a function that declares a local or anonymous class reaches
            // that class's functions
            for (c, child) in scopes.iter().enumerate() {
                if child.parent == Some(s) && child.decl.declared_in == Some(f) {
                    node.called_functions.extend(keys[c].iter().cloned());
                }
            }
            class.functions.push(node);
        }
    }

    class.ncloc = class_ncloc(&file.source, plan.decl, &split_out);

    // type references
    let mut excluded: HashSet<usize> = HashSet::new();
    for scope in &scopes {
        excluded.extend(scope.decl.name_token);
        excluded.extend(
            scope
                .decl
                .functions
                .iter()
                .filter(|f| f.is_constructor)
                .map(|f| f.name_token),
        );
    }
    let resolver = Resolver {
        registry,
        imports: &file.unit.imports,
        package: &plan.package,
        local_types: local_type_names(plan.top, &plan.top_key),
    };
    let mut k = plan.decl.tokens.start;
    while k < plan.decl.tokens.end {
        if let Some(inner) = split_out.iter().find(|d| d.tokens.start == k) {
            k = inner.tokens.end;
            continue;
        }
        let t = &tokens[k];
        if !t.is_name() || excluded.contains(&k) || (k > 0 && tokens[k - 1].is_punct('.')) {
            k += 1;
            continue;
        }
        let chain = name_chain(tokens, k);
        match resolver.resolve(&chain) {
            Resolution::Found(key) => {
                let owner = &registry[&key];
                if *owner != class.qualified_name || key == class.qualified_name {
                    class.referenced_classes.insert(owner.clone());
                }
            }
            Resolution::Ambiguous => {
                ambiguous.insert((plan.file, chain[0].to_string()));
            }
            Resolution::Unresolved => {}
        }
        k += 1;
    }

    class
}

fn lookup_field(
    scopes: &[Scope],
    field_ids: &[HashMap<&str, String>],
    from: usize,
    name: &str,
) -> Option<String> {
    let mut cursor = Some(from);
    while let Some(s) = cursor {
        if let Some(id) = field_ids[s].get(name) {
            return Some(id.clone());
        }
        cursor = scopes[s].parent;
    }
    None
}

fn lookup_calls(scopes: &[Scope], keys: &[Vec<String>], from: usize, call: &CallSite) -> Vec<String> {
    let functions = &scopes[from].decl.functions;
    if call.constructor {
        return functions
            .iter()
            .enumerate()
            .filter(|(_, f)| f.is_constructor && call.arity.is_none_or(|a| arity_matches(f, a)))
            .map(|(i, _)| keys[from][i].clone())
            .collect();
    }
    let mut cursor = Some(from);
    while let Some(s) = cursor {
        let named: Vec<usize> = scopes[s]
            .decl
            .functions
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_constructor && f.name == call.name)
            .map(|(i, _)| i)
            .collect();
        if !named.is_empty() {
            let by_arity: Vec<usize> = match call.arity {
                Some(a) => named
                    .iter()
                    .copied()
                    .filter(|&i| arity_matches(&scopes[s].decl.functions[i], a))
                    .collect(),
                None => Vec::new(),
            };
            let chosen = if by_arity.is_empty() { named } else { by_arity };
            return chosen.into_iter().map(|i| keys[s][i].clone()).collect();
        }
        cursor = scopes[s].parent;
    }
    Vec::new()
}

/// Code lines of a type's span, minus lines of member types that are
/// classes of their own.
fn class_ncloc(source: &SourceFile, decl: &TypeDecl, split_out: &[&TypeDecl]) -> u32 {
    (decl.start_line..=decl.end_line)
        .filter(|&line| source.code_lines[(line - 1) as usize])
        .filter(|&line| {
            !split_out
                .iter()
                .any(|d| (d.start_line..=d.end_line).contains(&line))
        })
        .count() as u32
}

/// Member type names visible anywhere inside a top-level type tree,
/// mapped to their registry keys.
fn local_type_names(top: &TypeDecl, top_key: &str) -> HashMap<String, String> {
    let mut names = HashMap::new();
    names.insert(top.name.clone(), top_key.to_string());
    let mut stack = vec![(top, top_key.to_string())];
    while let Some((decl, key)) = stack.pop() {
        for nested in decl.nested.iter().filter(|n| n.origin == TypeOrigin::Member) {
            let nested_key = format!("{key}.{}", nested.name);
            names.entry(nested.name.clone()).or_insert(nested_key.clone());
            stack.push((nested, nested_key));
        }
    }
    names
}

/// `a.b.C.d` starting at `k` as a list of identifier texts.
fn name_chain(tokens: &[Token], k: usize) -> Vec<&str> {
    let mut chain = vec![tokens[k].text.as_str()];
    let mut i = k;
    while i + 2 < tokens.len() && tokens[i + 1].is_punct('.') && tokens[i + 2].is_name() {
        chain.push(tokens[i + 2].text.as_str());
        i += 2;
    }
    chain
}

enum Resolution {
    Found(String),
    Ambiguous,
    Unresolved,
}

struct Resolver<'a> {
    registry: &'a HashMap<String, String>,
    imports: &'a [Import],
    package: &'a str,
    local_types: HashMap<String, String>,
}

impl Resolver<'_> {
    fn resolve(&self, chain: &[&str]) -> Resolution {
        match self.resolve_simple(chain[0]) {
            Resolution::Found(mut key) => {
                for segment in &chain[1..] {
                    let longer = format!("{key}.{segment}");
                    if self.registry.contains_key(&longer) {
                        key = longer;
                    } else {
                        break;
                    }
                }
                Resolution::Found(key)
            }
            Resolution::Ambiguous => Resolution::Ambiguous,
            Resolution::Unresolved => {
                for len in (2..=chain.len()).rev() {
                    let candidate = chain[..len].join(".");
                    if self.registry.contains_key(&candidate) {
                        return Resolution::Found(candidate);
                    }
                }
                Resolution::Unresolved
            }
        }
    }

    /// Java's lookup order: enclosing declarations, single-type imports,
    /// the same package, then on-demand imports.
    fn resolve_simple(&self, name: &str) -> Resolution {
        if let Some(key) = self.local_types.get(name) {
            return Resolution::Found(key.clone());
        }
        for import in self.imports.iter().filter(|i| !i.is_static && !i.wildcard) {
            if import.path.rsplit('.').next() == Some(name) {
                return if self.registry.contains_key(&import.path) {
                    Resolution::Found(import.path.clone())
                } else {
                    Resolution::Unresolved
                };
            }
        }
        let same_package = qualify(self.package, name);
        if self.registry.contains_key(&same_package) {
            return Resolution::Found(same_package);
        }
        let mut owners = BTreeSet::new();
        let mut found = None;
        for import in self.imports.iter().filter(|i| !i.is_static && i.wildcard) {
            let candidate = format!("{}.{name}", import.path);
            if let Some(owner) = self.registry.get(&candidate) {
                owners.insert(owner.clone());
                found.get_or_insert(candidate);
            }
        }
        match owners.len() {
            0 => Resolution::Unresolved,
            1 => Resolution::Found(found.expect("candidate recorded with owner")),
            _ => Resolution::Ambiguous,
        }
    }
}
