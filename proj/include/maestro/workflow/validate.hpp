// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "maestro/workflow/workflow.hpp"

#include <functional>
#include <string>
#include <vector>

namespace maestro {

enum class Severity { Error, Warning };

struct Diagnostic {
    std::string code; // stable "Wnnn"
    Severity severity = Severity::Error;
    std::string node;
    std::string msg;

    bool operator==(const Diagnostic&) const = default;
};

std::string_view to_string(Severity s);

/// One JSON object per line: {"code":"W001","severity":"error","node":"...","msg":"..."}
std::string diagnostic_json(const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diags);

/// Answers whether a subflow id names a known workflow.
using WorkflowResolver = std::function<bool(const std::string&)>;

/// Pure and deterministic. Codes:
///   W001 no supervisor            W002 more than one supervisor
///   W003 unresolved tool          W004 unresolved backend
///   W005 dangling edge endpoint   W006 worker not connected to supervisor
///   W007 entry is not the supervisor
///   W008 max_hops < 1             W009 unbound template placeholder
///   W010 empty team (warning)     W011 supervisor declares tools
///   W012 duplicate node name      W013 config/profile does not match node kind
///   W014 invalid backend binding  W015 invalid tool or store config
///   W016 unresolved subflow (only with a resolver)
std::vector<Diagnostic> validate_workflow(const WorkflowDoc& doc, const WorkflowResolver& resolver = {});

} // namespace maestro
