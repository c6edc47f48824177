#include "qcs/sim.hpp"

#include <stdexcept>
#include <string>

namespace qcs {

void Process::promise_type::unhandled_exception() {
    if (env) {
        env->set_failure(std::current_exception());
    } else {
        throw;  // resumed outside an environment; nothing can store it
    }
}

Process::promise_type::~promise_type() {
    if (env) {
        env->forget(std::coroutine_handle<promise_type>::from_promise(*this).address());
    }
}

SimEnv::~SimEnv() {
    // Activities still suspended (e.g. blocked on a store when the run ended)
    // own no resources beyond their frames; reclaim them here.
    auto frames = std::move(live_frames_);
    live_frames_.clear();
    for (void* frame : frames) {
        std::coroutine_handle<>::from_address(frame).destroy();
    }
}

EventHandle SimEnv::schedule(SimTime delay, std::function<void()> action) {
    if (!(delay >= 0)) {
        throw std::invalid_argument("schedule: delay must be non-negative, got " +
                                    std::to_string(delay));
    }
    auto flag = std::make_shared<bool>(false);
    events_.push(Event{now_ + delay, next_seq_++, {}, std::move(action), flag});
    return EventHandle{flag};
}

void SimEnv::schedule_resume(SimTime delay, std::coroutine_handle<> co) {
    if (!(delay >= 0)) {
        throw std::invalid_argument("delay must be non-negative, got " + std::to_string(delay));
    }
    events_.push(Event{now_ + delay, next_seq_++, co, {}, {}});
}

void SimEnv::spawn(Process p) {
    auto handle = std::exchange(p.handle_, {});
    if (!handle) throw std::logic_error("spawn: process already started or moved from");
    handle.promise().env = this;
    live_frames_.insert(handle.address());
    schedule_resume(0, handle);
}

SimTime SimEnv::run(std::optional<SimTime> until) {
    while (!events_.empty()) {
        if (until && events_.top().time > *until) break;
        Event ev = events_.top();
        events_.pop();
        assert(ev.time >= now_);
        now_ = ev.time;
        if (ev.cancelled && *ev.cancelled) continue;
        if (ev.co) {
            ev.co.resume();
        } else if (ev.fn) {
            ev.fn();
        }
        if (failure_) {
            std::rethrow_exception(std::exchange(failure_, nullptr));
        }
    }
    if (until && *until > now_) now_ = *until;
    return now_;
}

Delay::Delay(SimEnv& environment, SimTime duration) : env(environment), dt(duration) {
    if (!(duration >= 0)) {
        throw std::invalid_argument("Delay: duration must be non-negative, got " +
                                    std::to_string(duration));
    }
}

CapacityStore::CapacityStore(SimEnv& env, std::int64_t capacity)
    : env_(env), capacity_(capacity), level_(capacity) {
    if (capacity < 1) {
        throw std::invalid_argument("CapacityStore: capacity must be positive");
    }
}

CapacityStore::Acquire CapacityStore::acquire(std::int64_t amount) {
    if (amount < 1) {
        throw std::invalid_argument("acquire: amount must be positive, got " +
                                    std::to_string(amount));
    }
    if (amount > capacity_) {
        throw std::invalid_argument("acquire: request of " + std::to_string(amount) +
                                    " exceeds capacity " + std::to_string(capacity_) +
                                    " and can never be satisfied");
    }
    return Acquire{*this, amount};
}

void CapacityStore::release(std::int64_t amount) {
    if (amount < 1) {
        throw std::invalid_argument("release: amount must be positive, got " +
                                    std::to_string(amount));
    }
    if (level_ + amount > capacity_) {
        throw std::logic_error("release of " + std::to_string(amount) + " would raise level " +
                               std::to_string(level_) + " above capacity " +
                               std::to_string(capacity_) + "; over-release is an accounting bug");
    }
    level_ += amount;
    drain_waiters();
}

void CapacityStore::drain_waiters() {
    // Strict FIFO: stop at the first waiter that cannot be satisfied. The
    // level is committed at grant time so conservation holds at every event
    // boundary; the waiter itself resumes via the queue at the current time.
    while (!waiters_.empty() && waiters_.front().amount <= level_) {
        Waiter w = waiters_.front();
        waiters_.pop_front();
        level_ -= w.amount;
        env_.schedule_resume(0, w.co);
    }
}

}  // namespace qcs
