#include "trigit/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "trigit/diff.hpp"
#include "trigit/printer.hpp"

namespace trigit {

const char* editOriginName(EditOrigin o) {
  switch (o) {
    case EditOrigin::ExplicitAction: return "EXPLICIT_ACTION";
    case EditOrigin::GuardFold: return "GUARD_FOLD";
    case EditOrigin::MethodRemoval: return "METHOD_REMOVAL";
    case EditOrigin::CallsiteFold: return "CALLSITE_FOLD";
  }
  return "?";
}

bool EditSet::add(Edit edit) {
  for (const Edit& e : edits_) {
    if (e.file != edit.file) continue;
    if (edit.span.begin < e.span.end && e.span.begin < edit.span.end) return false;
  }
  edits_.push_back(std::move(edit));
  return true;
}

bool RunReport::anySatisfied() const {
  return std::any_of(triggers.begin(), triggers.end(),
                     [](const TriggerResult& r) { return r.satisfied; });
}

// ---------------------------------------------------------------------------
// query interpretation

namespace {

struct BoolOutcome {
  bool value = false;
  std::string reason;
  std::optional<Evidence> evidence;
};

struct Elem {
  enum Kind { Class, Method, Field, File, Config } kind = Class;
  const ClassModel* cls = nullptr;
  const MethodModel* method = nullptr;
  const FieldModel* field = nullptr;
  const JavaFileModel* file = nullptr;
  const BuildConfigModel* config = nullptr;

  std::string name() const {
    switch (kind) {
      case Class: return cls->name;
      case Method: return method->name;
      case Field: return field->name;
      case File: return file->path;
      case Config: return config->path;
    }
    return "";
  }
  std::string desc() const {
    switch (kind) {
      case Class: return "class " + cls->name;
      case Method: return "method " + method->name;
      case Field: return "field " + field->name;
      case File: return "file " + file->path;
      case Config: return "build config " + config->path;
    }
    return "";
  }
  std::optional<Evidence> evidence() const {
    switch (kind) {
      case Class: return Evidence{cls->file, cls->declSpan.line};
      case Method: return Evidence{method->file, method->declSpan.line};
      case Field: return Evidence{field->file, field->declSpan.line};
      case File: return Evidence{file->path, 1};
      case Config: return Evidence{config->path, config->versionLine};
    }
    return std::nullopt;
  }
  const Modifiers* modifiers() const {
    switch (kind) {
      case Class: return &cls->modifiers;
      case Method: return &method->modifiers;
      case Field: return &field->modifiers;
      default: return nullptr;
    }
  }
  static const char* singular(Kind k) {
    switch (k) {
      case Class: return "class";
      case Method: return "method";
      case Field: return "field";
      case File: return "file";
      case Config: return "build config";
    }
    return "element";
  }
};

struct Value {
  enum Tag { StreamV, OptionalV, ElemV, StrV, NumV, BoolV, VersionV, ModsV } tag = BoolV;
  // StreamV
  std::vector<Elem> elems;
  std::vector<std::string> strs;
  bool stringStream = false;
  Elem::Kind streamElem = Elem::Class;
  std::string streamDesc;
  // OptionalV
  std::optional<Elem> opt;
  std::string optDesc;
  // ElemV
  Elem elem;
  bool elemMissing = false;
  std::string elemDesc;
  // scalars
  std::string str;
  std::string strDesc;
  double num = 0;
  std::string numDesc;
  BoolOutcome boolean;
  JavaVersion version;
  std::optional<Evidence> versionEvidence;
  bool versionMissing = false;
  const Modifiers* mods = nullptr;
  std::string modsDesc;  // owning element description
  std::optional<Evidence> modsEvidence;
};

[[noreturn]] void evalBug(const std::string& what) {
  // Compile-time typing rules these out; kept as a defensive check.
  throw std::logic_error("EvalError: " + what);
}

const char* predicateWord(QueryOp op) {
  switch (op) {
    case QueryOp::IsPublic: return "public";
    case QueryOp::IsProtected: return "protected";
    case QueryOp::IsPrivate: return "private";
    case QueryOp::IsStatic: return "static";
    case QueryOp::IsFinal: return "final";
    default: return "?";
  }
}

bool modifiersSatisfy(const Modifiers& mods, QueryOp op) {
  switch (op) {
    case QueryOp::IsPublic: return mods.visibility == Visibility::Public;
    case QueryOp::IsProtected: return mods.visibility == Visibility::Protected;
    case QueryOp::IsPrivate: return mods.visibility == Visibility::Private;
    case QueryOp::IsStatic: return mods.isStatic;
    case QueryOp::IsFinal: return mods.isFinal;
    default: evalBug("predicate expected");
  }
}

bool modifiersSatisfyName(const Modifiers& mods, const std::string& pred) {
  if (pred == "isPublic") return mods.visibility == Visibility::Public;
  if (pred == "isProtected") return mods.visibility == Visibility::Protected;
  if (pred == "isPrivate") return mods.visibility == Visibility::Private;
  if (pred == "isStatic") return mods.isStatic;
  if (pred == "isFinal") return mods.isFinal;
  evalBug("unknown predicate name " + pred);
}

std::string predicateNameWord(const std::string& pred) {
  if (pred == "isPublic") return "public";
  if (pred == "isProtected") return "protected";
  if (pred == "isPrivate") return "private";
  if (pred == "isStatic") return "static";
  return "final";
}

std::string formatNumber(double d) {
  if (std::floor(d) == d && std::abs(d) < 1e15)
    return std::to_string(static_cast<long long>(d));
  return std::to_string(d);
}

struct Interpreter {
  const ProjectModel& model;
  const std::string& contextClass;

  Value eval(const QueryNode& n) {
    switch (n.op) {
      case QueryOp::SourceClasses: {
        Value v;
        v.tag = Value::StreamV;
        v.streamElem = Elem::Class;
        v.streamDesc = "classes";
        for (const ClassModel& c : model.classes) {
          Elem e;
          e.kind = Elem::Class;
          e.cls = &c;
          v.elems.push_back(e);
        }
        return v;
      }
      case QueryOp::SourceJavaFiles: {
        Value v;
        v.tag = Value::StreamV;
        v.streamElem = Elem::File;
        v.streamDesc = "java files";
        for (const JavaFileModel& f : model.javaFiles) {
          Elem e;
          e.kind = Elem::File;
          e.file = &f;
          v.elems.push_back(e);
        }
        return v;
      }
      case QueryOp::SourceBuildConfigs: {
        Value v;
        v.tag = Value::StreamV;
        v.streamElem = Elem::Config;
        v.streamDesc = "build configurations";
        for (const BuildConfigModel& c : model.buildConfigs) {
          Elem e;
          e.kind = Elem::Config;
          e.config = &c;
          v.elems.push_back(e);
        }
        return v;
      }
      case QueryOp::GetClass: {
        Value v;
        v.tag = Value::ElemV;
        v.elemDesc = "class " + n.name;
        ClassLookup hit = lookupClass(model, n.name);
        if (hit.cls) {
          v.elem.kind = Elem::Class;
          v.elem.cls = hit.cls;
        } else {
          v.elemMissing = true;
        }
        return v;
      }
      case QueryOp::HasClass: {
        Value v;
        v.tag = Value::BoolV;
        ClassLookup hit = lookupClass(model, n.name);
        v.boolean.value = hit.cls != nullptr;
        v.boolean.reason = hit.cls ? "class " + n.name + " exists"
                                   : "class " + n.name + " does not exist";
        if (hit.cls) v.boolean.evidence = Evidence{hit.cls->file, hit.cls->declSpan.line};
        return v;
      }
      case QueryOp::GetMethod:
      case QueryOp::GetField: {
        const ClassModel* cls = nullptr;
        std::string recvDesc;
        bool recvMissing = false;
        if (n.children.empty()) {
          ClassLookup hit = lookupClass(model, contextClass);
          cls = hit.cls;
          recvDesc = "the enclosing class";
          recvMissing = cls == nullptr;
        } else {
          Value recv = eval(*n.children[0]);
          if (recv.tag == Value::ElemV) {
            recvDesc = recv.elemDesc;
            if (!recv.elemMissing && recv.elem.kind == Elem::Class) cls = recv.elem.cls;
            else recvMissing = true;
          } else if (recv.tag == Value::OptionalV) {
            recvDesc = recv.optDesc;
            if (recv.opt && recv.opt->kind == Elem::Class) cls = recv.opt->cls;
            else recvMissing = true;
          } else {
            evalBug("getMethod/getField receiver must be a class");
          }
        }
        Value v;
        v.tag = Value::ElemV;
        bool wantMethod = n.op == QueryOp::GetMethod;
        v.elemDesc = (wantMethod ? "method " : "field ") + n.name;
        if (recvMissing || !cls) {
          v.elemMissing = true;
          return v;
        }
        if (wantMethod) {
          auto ms = methodsNamed(*cls, n.name);
          if (ms.empty()) v.elemMissing = true;
          else {
            v.elem.kind = Elem::Method;
            v.elem.method = ms.front();
          }
        } else {
          auto fs = fieldsNamed(*cls, n.name);
          if (fs.empty()) v.elemMissing = true;
          else {
            v.elem.kind = Elem::Field;
            v.elem.field = fs.front();
          }
        }
        return v;
      }
      case QueryOp::GetJavaVersion: {
        Value v;
        v.tag = Value::VersionV;
        if (n.children.empty()) {
          if (model.buildConfigs.empty()) {
            v.versionMissing = true;
            return v;
          }
          const BuildConfigModel& cfg = model.buildConfigs.front();
          v.version = cfg.javaVersion;
          v.versionEvidence = Evidence{cfg.path, cfg.versionLine};
          return v;
        }
        Value recv = eval(*n.children[0]);
        if (recv.tag != Value::ElemV || recv.elem.kind != Elem::Config)
          evalBug("getJavaVersion receiver must be a build config");
        if (recv.elemMissing) {
          v.versionMissing = true;
          return v;
        }
        v.version = recv.elem.config->javaVersion;
        v.versionEvidence =
            Evidence{recv.elem.config->path, recv.elem.config->versionLine};
        return v;
      }
      case QueryOp::GetName: {
        Value recv = eval(*n.children[0]);
        Value v;
        v.tag = Value::StrV;
        if (recv.tag == Value::ElemV) {
          v.strDesc = "name of " + recv.elemDesc;
          if (!recv.elemMissing) v.str = recv.elem.name();
        } else if (recv.tag == Value::OptionalV) {
          v.strDesc = "name of " + recv.optDesc;
          if (recv.opt) v.str = recv.opt->name();
        } else {
          evalBug("getName receiver must be an element");
        }
        return v;
      }
      case QueryOp::GetModifiers: {
        Value recv = eval(*n.children[0]);
        Value v;
        v.tag = Value::ModsV;
        const Elem* e = nullptr;
        if (recv.tag == Value::ElemV) {
          v.modsDesc = recv.elemDesc;
          if (!recv.elemMissing) e = &recv.elem;
        } else if (recv.tag == Value::OptionalV) {
          v.modsDesc = recv.optDesc;
          if (recv.opt) e = &*recv.opt;
        } else {
          evalBug("getModifiers receiver must be an element");
        }
        if (e) {
          v.mods = e->modifiers();
          v.modsEvidence = e->evidence();
        }
        return v;
      }
      case QueryOp::GetMethods:
      case QueryOp::GetFields: {
        Value recv = eval(*n.children[0]);
        const ClassModel* cls = nullptr;
        std::string recvDesc;
        if (recv.tag == Value::ElemV) {
          recvDesc = recv.elemDesc;
          if (!recv.elemMissing && recv.elem.kind == Elem::Class) cls = recv.elem.cls;
        } else if (recv.tag == Value::OptionalV) {
          recvDesc = recv.optDesc;
          if (recv.opt && recv.opt->kind == Elem::Class) cls = recv.opt->cls;
        } else {
          evalBug("getMethods/getFields receiver must be a class");
        }
        Value v;
        v.tag = Value::StreamV;
        bool methods = n.op == QueryOp::GetMethods;
        v.streamElem = methods ? Elem::Method : Elem::Field;
        v.streamDesc = (methods ? "methods of " : "fields of ") + recvDesc;
        if (cls) {
          if (methods)
            for (const MethodModel& m : cls->methods) {
              Elem e;
              e.kind = Elem::Method;
              e.method = &m;
              v.elems.push_back(e);
            }
          else
            for (const FieldModel& f : cls->fields) {
              Elem e;
              e.kind = Elem::Field;
              e.field = &f;
              v.elems.push_back(e);
            }
        }
        return v;
      }
      case QueryOp::Filter: {
        Value v = eval(*n.children[0]);
        if (v.tag != Value::StreamV || v.stringStream) evalBug("filter over non-stream");
        std::vector<Elem> kept;
        for (const Elem& e : v.elems) {
          const Modifiers* mods = e.modifiers();
          if (mods && modifiersSatisfyName(*mods, n.name)) kept.push_back(e);
        }
        v.elems = std::move(kept);
        v.streamDesc += " filtered by " + n.name;
        return v;
      }
      case QueryOp::Map: {
        Value v = eval(*n.children[0]);
        if (v.tag != Value::StreamV) evalBug("map over non-stream");
        if (n.name == "getName") {
          Value out;
          out.tag = Value::StreamV;
          out.stringStream = true;
          out.streamDesc = "names of " + v.streamDesc;
          for (const Elem& e : v.elems) out.strs.push_back(e.name());
          return out;
        }
        if (n.name == "getModifiers") {
          v.streamDesc = "modifiers of " + v.streamDesc;
          return v;  // predicates read the elements' modifiers either way
        }
        Value out;
        out.tag = Value::StreamV;
        bool methods = n.name == "getMethods";
        out.streamElem = methods ? Elem::Method : Elem::Field;
        out.streamDesc = (methods ? "methods of " : "fields of ") + v.streamDesc;
        for (const Elem& e : v.elems) {
          if (e.kind != Elem::Class) continue;
          if (methods)
            for (const MethodModel& m : e.cls->methods) {
              Elem me;
              me.kind = Elem::Method;
              me.method = &m;
              out.elems.push_back(me);
            }
          else
            for (const FieldModel& f : e.cls->fields) {
              Elem fe;
              fe.kind = Elem::Field;
              fe.field = &f;
              out.elems.push_back(fe);
            }
        }
        return out;
      }
      case QueryOp::Count: {
        Value v = eval(*n.children[0]);
        if (v.tag != Value::StreamV) evalBug("count over non-stream");
        Value out;
        out.tag = Value::NumV;
        out.num = static_cast<double>(v.stringStream ? v.strs.size() : v.elems.size());
        out.numDesc = "count of " + v.streamDesc;
        return out;
      }
      case QueryOp::AnyMatch: {
        Value v = eval(*n.children[0]);
        if (v.tag != Value::StreamV || v.stringStream) evalBug("anyMatch over non-stream");
        Value out;
        out.tag = Value::BoolV;
        std::string word = predicateNameWord(n.name);
        for (const Elem& e : v.elems) {
          const Modifiers* mods = e.modifiers();
          if (mods && modifiersSatisfyName(*mods, n.name)) {
            out.boolean = {true, e.desc() + " is " + word, e.evidence()};
            return out;
          }
        }
        out.boolean = {false, "none of " + v.streamDesc + " is " + word, std::nullopt};
        return out;
      }
      case QueryOp::FindAny: {
        Value v = eval(*n.children[0]);
        if (v.tag != Value::StreamV || v.stringStream) evalBug("findAny over non-stream");
        Value out;
        out.tag = Value::OptionalV;
        out.optDesc = std::string(Elem::singular(v.streamElem)) + " " + n.name;
        for (const Elem& e : v.elems) {
          if (e.name() == n.name) {
            out.opt = e;
            break;
          }
        }
        return out;
      }
      case QueryOp::IsPresent: {
        Value recv = eval(*n.children[0]);
        if (recv.tag != Value::OptionalV) evalBug("isPresent over non-optional");
        Value out;
        out.tag = Value::BoolV;
        out.boolean.value = recv.opt.has_value();
        out.boolean.reason = recv.optDesc + (recv.opt ? " exists" : " does not exist");
        if (recv.opt) out.boolean.evidence = recv.opt->evidence();
        return out;
      }
      case QueryOp::IsPublic:
      case QueryOp::IsProtected:
      case QueryOp::IsPrivate:
      case QueryOp::IsStatic:
      case QueryOp::IsFinal: {
        Value recv = eval(*n.children[0]);
        Value out;
        out.tag = Value::BoolV;
        std::string word = predicateWord(n.op);
        const Modifiers* mods = nullptr;
        std::string desc;
        std::optional<Evidence> ev;
        if (recv.tag == Value::ElemV) {
          desc = recv.elemDesc;
          if (!recv.elemMissing) {
            mods = recv.elem.modifiers();
            ev = recv.elem.evidence();
          } else {
            out.boolean = {false, desc + " not found", std::nullopt};
            return out;
          }
        } else if (recv.tag == Value::OptionalV) {
          desc = recv.optDesc;
          if (!recv.opt) {
            out.boolean = {false, desc + " does not exist", std::nullopt};
            return out;
          }
          mods = recv.opt->modifiers();
          ev = recv.opt->evidence();
        } else if (recv.tag == Value::ModsV) {
          desc = recv.modsDesc;
          if (!recv.mods) {
            out.boolean = {false, desc + " not found", std::nullopt};
            return out;
          }
          mods = recv.mods;
          ev = recv.modsEvidence;
        } else {
          evalBug("modifier predicate over unsupported value");
        }
        bool val = modifiersSatisfy(*mods, n.op);
        out.boolean = {val, desc + (val ? " is " : " is not ") + word, ev};
        return out;
      }
      case QueryOp::GreaterEqualThan: {
        Value lhs = eval(*n.children[0]);
        if (lhs.tag != Value::VersionV) evalBug("greaterEqualThan over non-version");
        Value rhs = eval(*n.children[1]);
        if (rhs.tag != Value::VersionV) evalBug("greaterEqualThan needs a version constant");
        Value out;
        out.tag = Value::BoolV;
        if (lhs.versionMissing) {
          out.boolean = {false, "no build configuration provides a Java version",
                         std::nullopt};
          return out;
        }
        bool val = greaterEqualThan(lhs.version, rhs.version);
        out.boolean = {val,
                       "Java version " + lhs.version.sourceText +
                           (val ? " >= " : " < ") + rhs.version.sourceText,
                       lhs.versionEvidence};
        return out;
      }
      case QueryOp::Equals: {
        Value lhs = eval(*n.children[0]);
        const QueryNode& rhs = *n.children[1];
        Value out;
        out.tag = Value::BoolV;
        if (lhs.tag == Value::StrV && rhs.op == QueryOp::LiteralString) {
          bool val = lhs.str == rhs.name;
          out.boolean = {val, lhs.strDesc + (val ? " equals \"" + rhs.name + "\""
                                                 : " is \"" + lhs.str + "\", not \"" +
                                                       rhs.name + "\""),
                         std::nullopt};
          return out;
        }
        if (lhs.tag == Value::NumV && rhs.op == QueryOp::LiteralNumber) {
          bool val = lhs.num == rhs.number;
          out.boolean = {val, lhs.numDesc + (val ? " equals " + formatNumber(rhs.number)
                                                 : " is " + formatNumber(lhs.num) +
                                                       ", not " + formatNumber(rhs.number)),
                         std::nullopt};
          return out;
        }
        if (lhs.tag == Value::BoolV && rhs.op == QueryOp::LiteralBool) {
          bool val = lhs.boolean.value == rhs.boolean;
          out.boolean = {val, lhs.boolean.reason, lhs.boolean.evidence};
          return out;
        }
        evalBug("equals over mismatched types");
      }
      case QueryOp::And:
      case QueryOp::Or: {
        bool isAnd = n.op == QueryOp::And;
        std::vector<BoolOutcome> outcomes;
        for (const auto& c : n.children) {
          Value v = eval(*c);
          if (v.tag != Value::BoolV) evalBug("logic over non-boolean");
          outcomes.push_back(std::move(v.boolean));
        }
        bool val = isAnd;
        for (const BoolOutcome& o : outcomes) val = isAnd ? (val && o.value) : (val || o.value);
        Value out;
        out.tag = Value::BoolV;
        out.boolean.value = val;
        bool pickSingle = isAnd ? !val : val;  // decisive single operand
        if (pickSingle) {
          for (const BoolOutcome& o : outcomes) {
            if (o.value != isAnd) {
              out.boolean.reason = o.reason;
              out.boolean.evidence = o.evidence;
              break;
            }
          }
        } else {
          std::string joined;
          for (std::size_t i = 0; i < outcomes.size(); ++i) {
            if (i) joined += " and ";
            joined += outcomes[i].reason;
            if (!out.boolean.evidence && outcomes[i].evidence)
              out.boolean.evidence = outcomes[i].evidence;
          }
          out.boolean.reason = joined;
        }
        return out;
      }
      case QueryOp::Not: {
        Value v = eval(*n.children[0]);
        if (v.tag != Value::BoolV) evalBug("logic over non-boolean");
        v.boolean.value = !v.boolean.value;
        return v;
      }
      case QueryOp::LiteralBool: {
        Value v;
        v.tag = Value::BoolV;
        v.boolean = {n.boolean, std::string("constant ") + (n.boolean ? "true" : "false"),
                     std::nullopt};
        return v;
      }
      case QueryOp::LiteralString: {
        Value v;
        v.tag = Value::StrV;
        v.str = n.name;
        v.strDesc = "\"" + n.name + "\"";
        return v;
      }
      case QueryOp::LiteralNumber: {
        Value v;
        v.tag = Value::NumV;
        v.num = n.number;
        v.numDesc = formatNumber(n.number);
        return v;
      }
      case QueryOp::VersionConst: {
        Value v;
        v.tag = Value::VersionV;
        v.version = JavaVersion::constant(n.versionMajor);
        return v;
      }
    }
    evalBug("unhandled query op");
  }
};

}  // namespace

TriggerResult evalQuery(const QueryNode& ir, const ProjectModel& model,
                        const std::string& contextClass, const std::string& unitName) {
  Interpreter interp{model, contextClass};
  Value v = interp.eval(ir);
  if (v.tag != Value::BoolV) evalBug("query did not produce a boolean");
  TriggerResult result;
  result.unit = unitName;
  result.satisfied = v.boolean.value;
  result.evidence = v.boolean.evidence;
  result.explanation = v.boolean.reason;
  if (result.evidence)
    result.explanation += "; file: " + result.evidence->file +
                          ", line: " + std::to_string(result.evidence->line);
  return result;
}

// ---------------------------------------------------------------------------
// encoding checks

namespace {

struct EncodingChecker {
  const TrigItUnit& unit;
  const ProjectModel& model;
  std::vector<EncodingError>& errors;
  std::vector<std::string>* warnings;

  void error(const Span& where, EncodingErrorCategory cat, std::string msg) {
    errors.push_back({unit.displayName(), unit.file, where, cat, std::move(msg)});
  }
  void warn(std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  }

  const ClassModel* resolveClassByName(const std::string& name, const Span& where) {
    ClassLookup hit = lookupClass(model, name);
    if (!hit.cls) {
      error(where, EncodingErrorCategory::MissingReferent,
            "class '" + name + "' not found");
      return nullptr;
    }
    if (hit.ambiguous)
      warn(unit.displayName() + ": class name '" + name +
           "' is ambiguous; using " + hit.cls->qualifiedName);
    return hit.cls;
  }

  void checkMember(const ClassModel& cls, bool wantMethod, const std::string& name,
                   const Span& where) {
    if (wantMethod) {
      auto ms = methodsNamed(cls, name);
      if (ms.empty())
        error(where, EncodingErrorCategory::MissingReferent,
              "method '" + name + "' not found in class '" + cls.name + "'");
      else if (ms.size() > 1)
        error(where, EncodingErrorCategory::Ambiguous,
              "method '" + name + "' is ambiguous in class '" + cls.name + "' (" +
                  std::to_string(ms.size()) + " declarations)");
    } else {
      auto fs = fieldsNamed(cls, name);
      if (fs.empty())
        error(where, EncodingErrorCategory::MissingReferent,
              "field '" + name + "' not found in class '" + cls.name + "'");
      else if (fs.size() > 1)
        error(where, EncodingErrorCategory::Ambiguous,
              "field '" + name + "' is ambiguous in class '" + cls.name + "' (" +
                  std::to_string(fs.size()) + " declarations)");
    }
  }

  // Returns the statically known class this node denotes, when it has one.
  const ClassModel* staticClassOf(const QueryNode& n) {
    if (n.op == QueryOp::GetClass) return lookupClass(model, n.name).cls;
    return nullptr;
  }

  void walk(const QueryNode& n) {
    switch (n.op) {
      case QueryOp::HasClass:
      case QueryOp::FindAny:
        // Existence tests: absence is their purpose. Still walk receivers.
        for (const auto& c : n.children) walk(*c);
        return;
      case QueryOp::GetClass:
        resolveClassByName(n.name, n.span);
        return;
      case QueryOp::GetMethod:
      case QueryOp::GetField: {
        bool wantMethod = n.op == QueryOp::GetMethod;
        if (n.children.empty()) {
          ClassLookup ctx = lookupClass(model, unit.enclosingClass);
          if (ctx.cls) checkMember(*ctx.cls, wantMethod, n.name, n.span);
          return;
        }
        walk(*n.children[0]);
        if (n.children[0]->op == QueryOp::GetClass) {
          if (const ClassModel* cls = staticClassOf(*n.children[0]))
            checkMember(*cls, wantMethod, n.name, n.span);
        }
        return;
      }
      case QueryOp::GetJavaVersion:
        if (n.children.empty() && model.buildConfigs.empty())
          error(n.span, EncodingErrorCategory::MissingReferent,
                "java version: no build configuration found");
        for (const auto& c : n.children) walk(*c);
        return;
      default:
        for (const auto& c : n.children) walk(*c);
        return;
    }
  }

  void checkAction(const ActionStep& step) {
    if (step.kind == ActionStep::Kind::Print) return;
    const ClassModel* cls = nullptr;
    if (step.target.className) {
      cls = resolveClassByName(*step.target.className, step.span);
    } else {
      cls = lookupClass(model, unit.enclosingClass).cls;
    }
    if (!cls) return;
    if (step.target.methodName) checkMember(*cls, true, *step.target.methodName, step.span);
    if (step.target.fieldName) checkMember(*cls, false, *step.target.fieldName, step.span);
  }
};

}  // namespace

std::vector<EncodingError> checkEncoding(const TrigItUnit& unit, const ProjectModel& model,
                                         std::vector<std::string>* warnings) {
  std::vector<EncodingError> errors;
  EncodingChecker checker{unit, model, errors, warnings};
  if (unit.query) checker.walk(*unit.query);
  for (const ActionStep& step : unit.actions) checker.checkAction(step);
  return errors;
}

// ---------------------------------------------------------------------------
// edits

namespace {

const ParsedFile* fileOf(const ProjectBuild& build, const std::string& path) {
  for (const ParsedFile& f : build.files)
    if (f.path == path) return &f;
  return nullptr;
}

int lineOfOffsetIn(const std::string& text, std::size_t off) {
  int line = 1;
  for (std::size_t i = 0; i < off && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

Span spanOfOffsets(const std::string& text, std::size_t begin, std::size_t end) {
  Span s;
  s.begin = begin;
  s.end = end;
  s.line = lineOfOffsetIn(text, begin);
  s.endLine = lineOfOffsetIn(text, end);
  s.column = 1;
  s.endColumn = 1;
  return s;
}

// Expands a declaration/statement span for deletion: eats the leading
// trivia after its last newline (dedicated comment lines go with the code
// they annotate) and the trailing whitespace through one newline.
Span expandForRemoval(const std::string& text, const ParsedFile& file, const Span& span) {
  std::size_t begin = span.begin;
  for (const Token& t : file.unit.tokens) {
    if (t.span.begin != span.begin) continue;
    if (!t.leading.empty()) {
      std::size_t triviaStart = t.leading.front().span.begin;
      std::string trivia = text.substr(triviaStart, span.begin - triviaStart);
      std::size_t firstNl = trivia.find('\n');
      begin = firstNl == std::string::npos ? triviaStart : triviaStart + firstNl + 1;
    }
    break;
  }
  std::size_t end = span.end;
  std::size_t p = end;
  while (p < text.size() && (text[p] == ' ' || text[p] == '\t')) ++p;
  if (p < text.size() && text[p] == '\r') ++p;
  if (p >= text.size()) end = p;
  else if (text[p] == '\n') end = p + 1;
  return spanOfOffsets(text, begin, end);
}

std::string lineIndentAt(const std::string& text, std::size_t offset) {
  std::size_t lineStart = text.rfind('\n', offset == 0 ? 0 : offset - 1);
  lineStart = lineStart == std::string::npos ? 0 : lineStart + 1;
  std::size_t i = lineStart;
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  return text.substr(lineStart, i - lineStart);
}

// Shifts the leading whitespace of every line after the first by `delta`
// columns (spaces); negative deltas strip up to that much indentation.
std::string shiftContinuationLines(const std::string& body, int delta) {
  if (delta == 0) return body;
  std::string out;
  std::size_t start = 0;
  bool first = true;
  while (start <= body.size()) {
    std::size_t nl = body.find('\n', start);
    std::string line = nl == std::string::npos ? body.substr(start)
                                               : body.substr(start, nl - start);
    if (!first) {
      if (delta > 0) {
        line.insert(0, static_cast<std::size_t>(delta), ' ');
      } else {
        std::size_t strip = 0;
        while (strip < static_cast<std::size_t>(-delta) && strip < line.size() &&
               (line[strip] == ' ' || line[strip] == '\t'))
          ++strip;
        line.erase(0, strip);
      }
    }
    out += line;
    if (nl == std::string::npos) break;
    out += "\n";
    start = nl + 1;
    first = false;
  }
  return out;
}

// Extracts the replacement text for a surviving branch, re-anchored at the
// `if` statement's position.
std::string branchReplacement(const std::string& text, const Span& ifSpan,
                              const Span& branchSpan) {
  std::string raw = text.substr(branchSpan.begin, branchSpan.end - branchSpan.begin);
  std::size_t contentBegin = branchSpan.begin;
  std::string content = raw;
  if (!raw.empty() && raw.front() == '{') {
    std::string inner = raw.substr(1, raw.size() - 2);
    std::size_t innerBase = branchSpan.begin + 1;
    std::size_t firstContent = inner.find_first_not_of(" \t\r\n");
    if (firstContent == std::string::npos) return "";  // empty branch body
    std::size_t lastContent = inner.find_last_not_of(" \t\r\n");
    content = inner.substr(firstContent, lastContent - firstContent + 1);
    contentBegin = innerBase + firstContent;
  }
  int ifIndent = static_cast<int>(lineIndentAt(text, ifSpan.begin).size());
  int branchIndent = static_cast<int>(lineIndentAt(text, contentBegin).size());
  return shiftContinuationLines(content, ifIndent - branchIndent);
}

}  // namespace

std::vector<Edit> executeActions(const TrigItUnit& unit, const ProjectModel& model,
                                 const ProjectBuild& build,
                                 std::vector<std::string>* diagnostics) {
  std::vector<Edit> edits;
  auto diag = [&](const std::string& msg) {
    if (diagnostics) diagnostics->push_back(unit.displayName() + ": " + msg);
  };

  for (const ActionStep& step : unit.actions) {
    if (step.kind == ActionStep::Kind::Print) continue;  // handled by the report

    const ClassModel* cls = step.target.className
                                ? lookupClass(model, *step.target.className).cls
                                : lookupClass(model, unit.enclosingClass).cls;
    if (!cls) {
      diag("action target class vanished (defensive)");
      continue;
    }

    const Modifiers* mods = nullptr;
    const Span* declSpan = nullptr;
    std::string targetDesc;
    std::string targetFile = cls->file;
    if (step.target.methodName) {
      auto ms = methodsNamed(*cls, *step.target.methodName);
      if (ms.empty()) {
        diag("method '" + *step.target.methodName + "' vanished (defensive)");
        continue;
      }
      mods = &ms.front()->modifiers;
      declSpan = &ms.front()->declSpan;
      targetDesc = "method " + ms.front()->name;
      targetFile = ms.front()->file;
    } else if (step.target.fieldName) {
      auto fs = fieldsNamed(*cls, *step.target.fieldName);
      if (fs.empty()) {
        diag("field '" + *step.target.fieldName + "' vanished (defensive)");
        continue;
      }
      mods = &fs.front()->modifiers;
      declSpan = &fs.front()->declSpan;
      targetDesc = "field " + fs.front()->name;
      targetFile = fs.front()->file;
    } else {
      mods = &cls->modifiers;
      declSpan = &cls->declSpan;
      targetDesc = "class " + cls->name;
    }

    const ParsedFile* pf = fileOf(build, targetFile);
    if (!pf) {
      diag("source of " + targetDesc + " unavailable (defensive)");
      continue;
    }
    std::string text = sourceOfUnit(pf->unit);

    auto pushEdit = [&](Span span, std::string replacement) {
      Edit e;
      e.file = targetFile;
      e.span = span;
      e.replacement = std::move(replacement);
      e.origin = EditOrigin::ExplicitAction;
      e.unit = unit.displayName();
      edits.push_back(std::move(e));
    };

    switch (step.mutation) {
      case MutationKind::SetPublic:
      case MutationKind::SetProtected:
      case MutationKind::SetPrivate: {
        Visibility want = step.mutation == MutationKind::SetPublic    ? Visibility::Public
                          : step.mutation == MutationKind::SetProtected
                              ? Visibility::Protected
                              : Visibility::Private;
        if (mods->visibility == want) {
          diag(targetDesc + " already " + visibilityKeyword(want));
          break;
        }
        if (mods->visibilitySpan) {
          pushEdit(*mods->visibilitySpan, visibilityKeyword(want));
        } else {
          Span at = spanOfOffsets(text, mods->span.begin, mods->span.begin);
          pushEdit(at, std::string(visibilityKeyword(want)) + " ");
        }
        break;
      }
      case MutationKind::SetStatic:
      case MutationKind::SetFinal: {
        bool isStaticMutation = step.mutation == MutationKind::SetStatic;
        bool current = isStaticMutation ? mods->isStatic : mods->isFinal;
        const char* word = isStaticMutation ? "static" : "final";
        if (current == step.flagValue) {
          diag(targetDesc + " already " + (step.flagValue ? word : std::string("non-") + word));
          break;
        }
        if (step.flagValue) {
          std::optional<Span> after =
              isStaticMutation
                  ? mods->visibilitySpan
                  : (mods->staticSpan ? mods->staticSpan : mods->visibilitySpan);
          if (after) {
            Span at = spanOfOffsets(text, after->end, after->end);
            pushEdit(at, std::string(" ") + word);
          } else {
            Span at = spanOfOffsets(text, mods->span.begin, mods->span.begin);
            pushEdit(at, std::string(word) + " ");
          }
        } else {
          Span kw = isStaticMutation ? *mods->staticSpan : *mods->finalSpan;
          std::size_t begin = kw.begin, end = kw.end;
          if (end < text.size() && text[end] == ' ') ++end;
          else if (begin > 0 && text[begin - 1] == ' ') --begin;
          pushEdit(spanOfOffsets(text, begin, end), "");
        }
        break;
      }
      case MutationKind::RemoveMethod:
      case MutationKind::RemoveField: {
        Edit e;
        e.file = targetFile;
        e.span = expandForRemoval(text, *pf, *declSpan);
        e.replacement = "";
        e.origin = EditOrigin::ExplicitAction;
        e.unit = unit.displayName();
        edits.push_back(std::move(e));
        break;
      }
    }
  }
  return edits;
}

std::vector<Edit> foldGuards(const std::vector<GuardSite>& sites, bool value,
                             const ProjectBuild& build, const std::string& unitName) {
  std::vector<Edit> edits;
  for (const GuardSite& site : sites) {
    const ParsedFile* pf = fileOf(build, site.file);
    if (!pf) continue;
    std::string text = sourceOfUnit(pf->unit);
    bool effective = value != site.negated;  // value XOR negated

    Edit e;
    e.file = site.file;
    e.origin = EditOrigin::GuardFold;
    e.unit = unitName;
    bool deleteStmt = !effective && !site.hasElse;
    if (!deleteStmt) {
      const Span& branch = effective ? site.thenSpan : *site.elseSpan;
      e.span = spanOfOffsets(text, site.ifSpan.begin, site.ifSpan.end);
      e.replacement = branchReplacement(text, site.ifSpan, branch);
      // An empty surviving branch leaves nothing behind; drop the whole line.
      if (e.replacement.empty()) deleteStmt = true;
    }
    if (deleteStmt) {
      e.span = expandForRemoval(text, *pf, site.ifSpan);
      e.replacement = "";
    }
    edits.push_back(std::move(e));
  }
  return edits;
}

std::vector<Edit> removeSatisfiedUnits(const std::vector<TrigItUnit>& units,
                                       const std::vector<TriggerResult>& results,
                                       const ProjectBuild& build) {
  std::vector<Edit> edits;
  for (std::size_t i = 0; i < units.size() && i < results.size(); ++i) {
    if (!results[i].satisfied) continue;
    const TrigItUnit& unit = units[i];
    const ParsedFile* pf = fileOf(build, unit.file);
    if (!pf) continue;
    std::string text = sourceOfUnit(pf->unit);
    Edit e;
    e.file = unit.file;
    e.span = expandForRemoval(text, *pf, unit.declSpan);
    e.replacement = "";
    e.origin = EditOrigin::MethodRemoval;
    e.unit = unit.displayName();
    edits.push_back(std::move(e));
  }
  return edits;
}

std::map<std::string, std::string> materializeEdits(const EditSet& edits,
                                                    const ProjectBuild& build) {
  std::map<std::string, std::string> out;
  for (const ParsedFile& f : build.files) out[f.path] = sourceOfUnit(f.unit);
  for (const auto& [path, content] : build.configTexts) out[path] = content;
  for (const auto& [path, content] : build.unparsedTexts) out[path] = content;
  std::map<std::string, std::vector<TextEdit>> perFile;
  for (const Edit& e : edits.edits())
    perFile[e.file].push_back(TextEdit{e.span, e.replacement});
  for (auto& [path, textEdits] : perFile) {
    auto it = out.find(path);
    if (it == out.end()) continue;
    it->second = applyTextEdits(it->second, textEdits);
  }
  return out;
}

Patch renderPatch(const EditSet& edits, const ProjectBuild& build) {
  Patch patch;
  if (edits.empty()) return patch;
  std::map<std::string, std::vector<TextEdit>> perFile;
  for (const Edit& e : edits.edits())
    perFile[e.file].push_back(TextEdit{e.span, e.replacement});
  for (const auto& [path, textEdits] : perFile) {  // std::map: path order
    const ParsedFile* pf = fileOf(build, path);
    if (!pf) continue;
    std::string oldText = sourceOfUnit(pf->unit);
    std::string newText = applyTextEdits(oldText, textEdits);
    std::string diff = unifiedDiff(oldText, newText, "a/" + path, "b/" + path);
    if (diff.empty()) continue;
    ++patch.filesTouched;
    std::size_t pos = 0;
    while ((pos = diff.find("@@ -", pos)) != std::string::npos) {
      ++patch.hunks;
      pos += 4;
    }
    patch.text += diff;
  }
  return patch;
}

namespace {

// Bare `trigger();` expression statements outside guard ifs dangle once the
// unit is removed; they are folded away too.
std::vector<Edit> strayCallEdits(const TrigItUnit& unit, const ProjectBuild& build) {
  std::vector<Edit> edits;
  for (const ParsedFile& file : build.files) {
    std::string text;
    visit(*file.unit.root, [&](const AstNode& n) {
      if (n.kind == NodeKind::MethodDecl && hasAnnotation(n, "TrigItMethod")) return false;
      if (n.kind != NodeKind::ExprStmt || n.isAssign) return true;
      const AstNode& e = *n.children[0];
      bool isBareCall = e.kind == NodeKind::CallChain && e.children.size() == 1 &&
                        e.children[0]->kind == NodeKind::MemberAccess &&
                        e.children[0]->isCall && e.children[0]->text == unit.methodName;
      if (!isBareCall) return true;
      if (text.empty()) text = sourceOfUnit(file.unit);
      Edit edit;
      edit.file = file.path;
      edit.span = expandForRemoval(text, file, n.span);
      edit.replacement = "";
      edit.origin = EditOrigin::CallsiteFold;
      edit.unit = unit.displayName();
      edits.push_back(std::move(edit));
      return true;
    });
  }
  return edits;
}

}  // namespace

EvalOutput evaluateAll(const ProjectBuild& build, const FrontendResult& frontend,
                       const EvalOptions& options) {
  using Clock = std::chrono::steady_clock;
  auto msSince = [](Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0)
        .count();
  };

  EvalOutput out;
  RunReport& report = out.report;
  report.errors = frontend.errors;
  report.diagnostics = frontend.diagnostics;

  const std::vector<TrigItUnit>& units = frontend.units;

  // Phase 1: encoding checks for every unit, before anything runs.
  std::vector<bool> blocked(units.size(), false);
  for (std::size_t i = 0; i < units.size(); ++i) {
    std::vector<std::string> warnings;
    std::vector<EncodingError> errs = checkEncoding(units[i], build.model, &warnings);
    blocked[i] = !errs.empty();
    for (EncodingError& e : errs) report.errors.push_back(std::move(e));
    for (std::string& w : warnings) report.diagnostics.push_back(std::move(w));
  }

  // Phase 2: evaluate all triggers; no edit exists yet.
  auto tEval = Clock::now();
  for (std::size_t i = 0; i < units.size(); ++i) {
    const TrigItUnit& unit = units[i];
    TriggerResult r;
    if (blocked[i]) {
      r.unit = unit.displayName();
      r.satisfied = false;
      r.unevaluable = true;
      r.explanation = "unevaluable: encoding errors reported for this unit";
    } else if (options.assumeTrue) {
      r.unit = unit.displayName();
      r.satisfied = true;
      r.explanation = "forced by assume-true";
    } else {
      r = evalQuery(*unit.query, build.model, unit.enclosingClass, unit.displayName());
    }
    report.triggers.push_back(std::move(r));
  }
  report.timings.evaluateMs = msSince(tEval);

  // Print steps of satisfied action units reach the report in every mode.
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (blocked[i] || !report.triggers[i].satisfied) continue;
    if (units[i].kind != UnitKind::Action) continue;
    for (const ActionStep& step : units[i].actions)
      if (step.kind == ActionStep::Kind::Print)
        report.diagnostics.push_back("[print] " + units[i].displayName() + ": " +
                                     step.message);
  }

  // Phase 3: deferred edits, only in fold/patch mode and unless suppressed.
  auto tAction = Clock::now();
  bool editsWanted = options.mode != RunMode::Notify && !options.noAction;
  if (editsWanted) {
    auto addAll = [&](std::vector<Edit> edits) {
      for (Edit& e : edits) {
        Edit copy = e;
        if (!report.edits.add(std::move(e)))
          report.diagnostics.push_back("conflicting edit skipped: " + copy.file + ":" +
                                       std::to_string(copy.span.line) + " (" +
                                       copy.unit + ")");
      }
    };
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (blocked[i] || !report.triggers[i].satisfied) continue;
      const TrigItUnit& unit = units[i];
      if (unit.kind == UnitKind::Action) {
        addAll(executeActions(unit, build.model, build, &report.diagnostics));
      } else {
        addAll(foldGuards(unit.guardSites, true, build, unit.displayName()));
        addAll(strayCallEdits(unit, build));
      }
    }
    // Only unblocked satisfied units are removed.
    std::vector<TriggerResult> effective = report.triggers;
    for (std::size_t i = 0; i < effective.size(); ++i)
      if (blocked[i]) effective[i].satisfied = false;
    addAll(removeSatisfiedUnits(units, effective, build));
  }
  report.timings.actionMs = msSince(tAction);

  // Phase 4: render.
  auto tRender = Clock::now();
  if (options.mode == RunMode::Fold) {
    out.transformed = materializeEdits(report.edits, build);
  } else if (options.mode == RunMode::Patch) {
    out.patch = renderPatch(report.edits, build);
  }
  report.timings.renderMs = msSince(tRender);
  return out;
}

}  // namespace trigit
