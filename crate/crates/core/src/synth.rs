//! Synthetic inputs for property tests, benchmarks and scale checks.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{ClassKind, ClassNode, FunctionNode, PackageNode, Project};

/// A random, structurally valid project model with 1..=`max_packages`
/// packages of 1..=`max_classes` classes each.
pub fn random_project<R: Rng>(rng: &mut R, max_packages: usize, max_classes: usize) -> Project {
    let mut project = Project::new("synthetic", "");
    let package_count = rng.gen_range(1..=max_packages.max(1));
    for p in 0..package_count {
        let mut package = PackageNode::new(format!("pkg{p}"));
        for c in 0..rng.gen_range(1..=max_classes.max(1)) {
            package.classes.push(random_class(rng, format!("pkg{p}.C{c}")));
        }
        project.packages.push(package);
    }
    let names: Vec<String> = project.classes().map(|c| c.qualified_name.clone()).collect();
    for package in &mut project.packages {
        for class in &mut package.classes {
            for _ in 0..rng.gen_range(0..4) {
                class.referenced_classes.insert(names.choose(rng).unwrap().clone());
            }
        }
    }
    project
}

fn random_class<R: Rng>(rng: &mut R, name: String) -> ClassNode {
    let mut class = ClassNode::new(name, ClassKind::Class);
    class.ncloc = rng.gen_range(0..400);
    let fields = rng.gen_range(0..8);
    class.fields = (0..fields).map(|i| format!("f{i}")).collect();
    let functions = rng.gen_range(0..12);
    for i in 0..functions {
        let mut f = if i == 0 && rng.gen_bool(0.3) {
            FunctionNode::constructor(format!("m{i}()"))
        } else {
            FunctionNode::new(format!("m{i}()"))
        };
        if fields > 0 {
            for _ in 0..rng.gen_range(0..3) {
                f.accessed_fields.insert(format!("f{}", rng.gen_range(0..fields)));
            }
        }
        if rng.gen_bool(0.3) {
            f.called_functions.insert(format!("m{}()", rng.gen_range(0..functions)));
        }
        class.functions.push(f);
    }
    class
}

/// Shape of a generated Java source tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeSpec {
    pub packages: usize,
    pub classes_per_package: usize,
    pub methods_per_class: usize,
    pub seed: u64,
}

impl TreeSpec {
    /// Roughly the size of a mid-sized desktop application: about 65K
    /// NCLOC in 900 classes across 50 packages.
    pub fn large() -> Self {
        Self {
            packages: 50,
            classes_per_package: 18,
            methods_per_class: 9,
            seed: 7,
        }
    }
}

/// Writes a compilable-looking Java tree under `root` and returns the
/// number of files written.
pub fn write_java_tree(root: &Path, spec: &TreeSpec) -> Result<usize> {
    use rand::SeedableRng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(spec.seed);
    let mut written = 0;
    for p in 0..spec.packages {
        let dir = root.join(format!("app/p{p:02}"));
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        for c in 0..spec.classes_per_package {
            let source = java_class(&mut rng, spec, p, c);
            let path = dir.join(format!("C{p:02}x{c:02}.java"));
            std::fs::write(&path, source).map_err(|e| Error::io(&path, e))?;
            written += 1;
        }
    }
    Ok(written)
}

fn java_class<R: Rng>(rng: &mut R, spec: &TreeSpec, p: usize, c: usize) -> String {
    let mut s = String::new();
    let name = format!("C{p:02}x{c:02}");
    let local = format!("C{p:02}x{:02}", rng.gen_range(0..spec.classes_per_package));
    let remote_pkg = if rng.gen_bool(0.7) { p } else { rng.gen_range(0..spec.packages) };
    let remote = format!("C{remote_pkg:02}x{:02}", rng.gen_range(0..spec.classes_per_package));
    let _ = writeln!(s, "package app.p{p:02};\n");
    let _ = writeln!(s, "import java.util.ArrayList;");
    let _ = writeln!(s, "import java.util.List;");
    let _ = writeln!(s, "import java.util.Objects;");
    if remote_pkg != p {
        let _ = writeln!(s, "import app.p{remote_pkg:02}.{remote};");
    }
    let _ = writeln!(s, "\n/**\n * Generated class {name}.\n */");
    let _ = writeln!(s, "public class {name} {{");
    let _ = writeln!(s, "    private final List<{local}> peers = new ArrayList<>();");
    let _ = writeln!(s, "    private {remote} partner;");
    let _ = writeln!(s, "    private int count;");
    let _ = writeln!(s, "    private long stamp;");
    let _ = writeln!(s, "    private String label = \"{name} /* not a comment */\";\n");
    let _ = writeln!(s, "    public {name}(int start) {{\n        this.count = start;\n        this.stamp = Objects.hash(label, start);\n    }}\n");
    for m in 0..spec.methods_per_class {
        let _ = writeln!(s, "    // method {m}");
        match m % 3 {
            0 => {
                let _ = writeln!(s, "    public int compute{m}(int x) {{");
                let _ = writeln!(s, "        int y = x + count;");
                let _ = writeln!(s, "        for (int i = 0; i < x; i++) {{");
                let _ = writeln!(s, "            y += i * {m};");
                let _ = writeln!(s, "        }}");
                let _ = writeln!(s, "        return y;");
                let _ = writeln!(s, "    }}");
            }
            1 => {
                let _ = writeln!(s, "    public void add{m}({local} peer) {{");
                let _ = writeln!(s, "        if (peer != null) {{");
                let _ = writeln!(s, "            peers.add(peer);");
                let _ = writeln!(s, "        }}");
                let _ = writeln!(s, "    }}");
            }
            _ => {
                let _ = writeln!(s, "    public String describe{m}() {{");
                let _ = writeln!(s, "        StringBuilder b = new StringBuilder(label);");
                let _ = writeln!(s, "        b.append(compute{}(peers.size()));", m - 2);
                let _ = writeln!(s, "        if (partner != null) {{");
                let _ = writeln!(s, "            b.append(partner.toString());");
                let _ = writeln!(s, "        }}");
                let _ = writeln!(s, "        return b.toString();");
                let _ = writeln!(s, "    }}");
            }
        }
        s.push('\n');
    }
    s.push_str("}\n");
    s
}
