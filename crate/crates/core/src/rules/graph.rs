use std::collections::HashMap;

use crate::rules::Rule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleGraphIssue {
    /// `rule` names a component that is not defined.
    UnknownRule { rule: String, component: String },
    /// Rule names along a component cycle, starting from the first rule
    /// (in definition order) that reaches it.
    CycleDetected(Vec<String>),
}

/// Checks component references: every name resolves and the component
/// graph is acyclic. Each distinct cycle is reported once.
pub fn validate_rule_graph(rules: &[Rule]) -> Vec<RuleGraphIssue> {
    let index: HashMap<&str, usize> =
        rules.iter().enumerate().map(|(i, r)| (r.name.as_str(), i)).collect();
    let mut issues = Vec::new();
    for rule in rules {
        for comp in &rule.components {
            if !index.contains_key(comp.as_str()) {
                issues.push(RuleGraphIssue::UnknownRule {
                    rule: rule.name.clone(),
                    component: comp.clone(),
                });
            }
        }
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut marks = vec![Mark::New; rules.len()];
    let mut stack = Vec::new();

    fn visit(
        i: usize,
        rules: &[Rule],
        index: &HashMap<&str, usize>,
        marks: &mut [Mark],
        stack: &mut Vec<usize>,
        issues: &mut Vec<RuleGraphIssue>,
    ) {
        marks[i] = Mark::Active;
        stack.push(i);
        for comp in &rules[i].components {
            let Some(&j) = index.get(comp.as_str()) else { continue };
            match marks[j] {
                Mark::New => visit(j, rules, index, marks, stack, issues),
                Mark::Active => {
                    let start = stack.iter().position(|&k| k == j).unwrap_or(0);
                    let cycle = stack[start..].iter().map(|&k| rules[k].name.clone()).collect();
                    issues.push(RuleGraphIssue::CycleDetected(cycle));
                }
                Mark::Done => {}
            }
        }
        stack.pop();
        marks[i] = Mark::Done;
    }

    for i in 0..rules.len() {
        if marks[i] == Mark::New {
            visit(i, rules, &index, &mut marks, &mut stack, &mut issues);
        }
    }
    issues
}
