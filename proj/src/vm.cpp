#include "phoenix/vm.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <utility>

#include "phoenix/numfmt.hpp"

namespace phoenix {

namespace {

struct Frame {
    const FunctionChunk* fn = nullptr;
    size_t ip = 0;
    std::vector<Value> locals;
};

std::string offset_text(size_t off) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04zx", off);
    return buf;
}

class Machine {
public:
    Machine(const ProgramImage& image, std::istream& in, std::ostream& out,
            const VmOptions& opts, std::ostream* trace)
        : image_(image), in_(in), out_(out), opts_(opts), trace_(trace) {}

    void run() {
        globals_.reserve(image_.globals.size());
        for (const GlobalInfo& g : image_.globals) {
            globals_.push_back(default_value(g.type, g.aux));
        }
        push_frame(image_.entry, 0);
        loop();
    }

private:
    const ProgramImage& image_;
    std::istream& in_;
    std::ostream& out_;
    VmOptions opts_;
    std::ostream* trace_;

    std::vector<Value> stack_;
    std::vector<Frame> frames_;
    std::vector<Value> globals_;
    uint64_t steps_ = 0;

    // ---- value access ------------------------------------------------------

    static double as_num(const Value& v) {
        if (const double* d = std::get_if<double>(&v)) return *d;
        runtime_fail("R-008", "type confusion: expected a number");
    }

    static const std::string& as_str(const Value& v) {
        if (const std::string* s = std::get_if<std::string>(&v)) return *s;
        runtime_fail("R-008", "type confusion: expected a string");
    }

    static const std::shared_ptr<Obj>& as_obj(const Value& v) {
        if (const auto* o = std::get_if<std::shared_ptr<Obj>>(&v)) return *o;
        runtime_fail("R-008", "type confusion: expected an object");
    }

    Value pop() {
        if (stack_.empty()) {
            runtime_fail("R-008", "operand stack underflow");
        }
        Value v = std::move(stack_.back());
        stack_.pop_back();
        return v;
    }

    void push(Value v) { stack_.push_back(std::move(v)); }

    // ---- construction ------------------------------------------------------

    Value default_value(SlotType type, uint16_t aux) {
        switch (type) {
        case SlotType::Num: return 0.0;
        case SlotType::Str: return std::string();
        case SlotType::NumList: return std::make_shared<NumArray>(aux, 0.0);
        case SlotType::StrList: return std::make_shared<StrArray>(aux);
        case SlotType::Object: return make_object(aux);
        }
        return 0.0;
    }

    Value make_object(uint16_t class_index) {
        auto obj = std::make_shared<Obj>();
        obj->class_index = class_index;
        const ClassInfo& cls = image_.classes[class_index];
        obj->fields.reserve(cls.fields.size());
        for (const FieldInfo& f : cls.fields) {
            switch (f.type) {
            case SlotType::Num:
                obj->fields.emplace_back(f.num_default);
                break;
            case SlotType::Str:
                obj->fields.emplace_back(f.str_default);
                break;
            case SlotType::NumList:
                obj->fields.emplace_back(
                    std::make_shared<NumArray>(f.num_list_default));
                break;
            case SlotType::StrList:
                obj->fields.emplace_back(
                    std::make_shared<StrArray>(f.str_list_default));
                break;
            case SlotType::Object:
                obj->fields.push_back(make_object(f.aux));
                break;
            }
        }
        return obj;
    }

    void push_frame(uint16_t fn_index, uint32_t argc) {
        if (frames_.size() >= opts_.max_frames) {
            runtime_fail("R-005", "call depth exceeded " +
                                      std::to_string(opts_.max_frames) +
                                      " frames");
        }
        const FunctionChunk& fn = image_.functions[fn_index];
        Frame frame;
        frame.fn = &fn;
        frame.locals.resize(fn.local_slot_count);
        for (size_t i = argc; i-- > 0;) {
            frame.locals[i] = pop();
        }
        frames_.push_back(std::move(frame));
    }

    // ---- array and field plumbing -------------------------------------------

    // Validates a numeric index against length; R-003 outside 0..len-1.
    static size_t check_index(double idx, size_t len) {
        if (idx != std::floor(idx) || idx < 0 ||
            idx >= static_cast<double>(len)) {
            runtime_fail("R-003", "array index " + num_to_str(idx) +
                                      " out of bounds for length " +
                                      std::to_string(len));
        }
        return static_cast<size_t>(idx);
    }

    void do_load_idx() {
        double idx = as_num(pop());
        Value arr = pop();
        if (const auto* na = std::get_if<std::shared_ptr<NumArray>>(&arr)) {
            push((**na)[check_index(idx, (*na)->size())]);
        } else if (const auto* sa =
                       std::get_if<std::shared_ptr<StrArray>>(&arr)) {
            push((**sa)[check_index(idx, (*sa)->size())]);
        } else {
            runtime_fail("R-008", "type confusion: expected an array");
        }
    }

    void do_store_idx() {
        Value val = pop();
        double idx = as_num(pop());
        Value arr = pop();
        if (const auto* na = std::get_if<std::shared_ptr<NumArray>>(&arr)) {
            (**na)[check_index(idx, (*na)->size())] = as_num(val);
        } else if (const auto* sa =
                       std::get_if<std::shared_ptr<StrArray>>(&arr)) {
            (**sa)[check_index(idx, (*sa)->size())] = as_str(val);
        } else {
            runtime_fail("R-008", "type confusion: expected an array");
        }
    }

    void do_input(uint32_t kind) {
        std::string prompt = as_str(pop());
        out_ << "? " << prompt << "\n";
        out_.flush();
        std::string line;
        if (!read_input_line(in_, line)) {
            runtime_fail("R-007", "input stream exhausted");
        }
        if (kind == 0) {
            std::optional<double> v = parse_num_input(line);
            if (!v) {
                runtime_fail("R-004",
                             "cannot read '" + line + "' as a number");
            }
            push(*v);
        } else {
            push(std::move(line));
        }
    }

    void do_compare(Op op) {
        Value b = pop();
        Value a = pop();
        bool result = false;
        if (op == Op::CmpEq || op == Op::CmpNe) {
            if (std::holds_alternative<std::string>(a) &&
                std::holds_alternative<std::string>(b)) {
                result = std::get<std::string>(a) == std::get<std::string>(b);
            } else {
                result = as_num(a) == as_num(b);
            }
            if (op == Op::CmpNe) result = !result;
        } else {
            double x = as_num(a);
            double y = as_num(b);
            switch (op) {
            case Op::CmpLt: result = x < y; break;
            case Op::CmpGt: result = x > y; break;
            case Op::CmpLe: result = x <= y; break;
            case Op::CmpGe: result = x >= y; break;
            default: break;
            }
        }
        push(result ? 1.0 : 0.0);
    }

    void print_trace(const Frame& fr, const Instr& ins) {
        *trace_ << fr.fn->name << ' ' << offset_text(fr.ip) << ": "
                << op_name(ins.op);
        switch (ins.op) {
        case Op::Jmp:
        case Op::JmpIfFalse:
            *trace_ << ' ' << ins.rel;
            break;
        case Op::NewArr:
        case Op::Call:
            *trace_ << ' ' << ins.a << ' ' << ins.b;
            break;
        case Op::PushNum:
        case Op::PushStr:
        case Op::Load:
        case Op::Store:
        case Op::LoadGlobal:
        case Op::StoreGlobal:
        case Op::NewObj:
        case Op::GetField:
        case Op::SetField:
        case Op::Input:
            *trace_ << ' ' << ins.a;
            break;
        default:
            break;
        }
        *trace_ << " [depth " << stack_.size() << "]\n";
    }

    // ---- interpreter loop ----------------------------------------------------

    void loop() {
        while (true) {
            if (steps_ >= opts_.max_steps) {
                runtime_fail("R-006",
                             "step limit of " +
                                 std::to_string(opts_.max_steps) +
                                 " exceeded");
            }
            ++steps_;

            Frame& fr = frames_.back();
            Instr ins;
            if (!decode_instr(fr.fn->code, fr.ip, ins)) {
                runtime_fail("R-008", "corrupt code stream");
            }
            if (trace_) print_trace(fr, ins);
            fr.ip += ins.size;

            switch (ins.op) {
            case Op::PushNum:
                push(image_.num_pool[ins.a]);
                break;
            case Op::PushStr:
                push(image_.str_pool[ins.a]);
                break;
            case Op::Load:
                push(fr.locals[ins.a]);
                break;
            case Op::Store:
                fr.locals[ins.a] = pop();
                break;
            case Op::LoadGlobal:
                push(globals_[ins.a]);
                break;
            case Op::StoreGlobal:
                globals_[ins.a] = pop();
                break;
            case Op::NewArr:
                if (ins.a == 0) {
                    push(std::make_shared<NumArray>(ins.b, 0.0));
                } else {
                    push(std::make_shared<StrArray>(ins.b));
                }
                break;
            case Op::LoadIdx:
                do_load_idx();
                break;
            case Op::StoreIdx:
                do_store_idx();
                break;
            case Op::Add: {
                double b = as_num(pop());
                double a = as_num(pop());
                push(a + b);
                break;
            }
            case Op::Sub: {
                double b = as_num(pop());
                double a = as_num(pop());
                push(a - b);
                break;
            }
            case Op::Mul: {
                double b = as_num(pop());
                double a = as_num(pop());
                push(a * b);
                break;
            }
            case Op::Div: {
                double b = as_num(pop());
                double a = as_num(pop());
                if (b == 0) runtime_fail("R-001", "division by zero");
                push(a / b);
                break;
            }
            case Op::Mod: {
                double b = as_num(pop());
                double a = as_num(pop());
                if (b == 0) runtime_fail("R-002", "modulo by zero");
                push(std::fmod(a, b));
                break;
            }
            case Op::Neg:
                push(-as_num(pop()));
                break;
            case Op::Concat: {
                Value b = pop();
                Value a = pop();
                push(as_str(a) + as_str(b));
                break;
            }
            case Op::NumToStr:
                push(num_to_str(as_num(pop())));
                break;
            case Op::CmpEq:
            case Op::CmpNe:
            case Op::CmpLt:
            case Op::CmpGt:
            case Op::CmpLe:
            case Op::CmpGe:
                do_compare(ins.op);
                break;
            case Op::Jmp:
                fr.ip = static_cast<size_t>(
                    static_cast<int64_t>(fr.ip) + ins.rel);
                break;
            case Op::JmpIfFalse:
                if (as_num(pop()) == 0) {
                    fr.ip = static_cast<size_t>(
                        static_cast<int64_t>(fr.ip) + ins.rel);
                }
                break;
            case Op::Call:
                push_frame(static_cast<uint16_t>(ins.a), ins.b);
                break;
            case Op::Ret: {
                Value result = pop();
                frames_.pop_back();
                if (frames_.empty()) {
                    runtime_fail("R-008", "return from the entry frame");
                }
                push(std::move(result));
                break;
            }
            case Op::Show:
                out_ << as_str(pop()) << '\n';
                break;
            case Op::Input:
                do_input(ins.a);
                break;
            case Op::NewObj:
                push(make_object(static_cast<uint16_t>(ins.a)));
                break;
            case Op::GetField: {
                Value v = pop();
                const auto& obj = as_obj(v);
                if (ins.a >= obj->fields.size()) {
                    runtime_fail("R-008", "field index out of range");
                }
                push(obj->fields[ins.a]);
                break;
            }
            case Op::SetField: {
                Value val = pop();
                Value target = pop();
                const auto& obj = as_obj(target);
                if (ins.a >= obj->fields.size()) {
                    runtime_fail("R-008", "field index out of range");
                }
                obj->fields[ins.a] = std::move(val);
                break;
            }
            case Op::Halt:
                out_.flush();
                return;
            }
        }
    }
};

} // namespace

void run_image(const ProgramImage& image, std::istream& in, std::ostream& out,
               const VmOptions& opts, std::ostream* trace_out) {
    Machine machine(image, in, out, opts, trace_out);
    machine.run();
}

} // namespace phoenix
