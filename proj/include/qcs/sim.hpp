#pragma once

#include <cassert>
#include <coroutine>
#include <cstdint>
#include <deque>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <unordered_set>
#include <utility>
#include <vector>

namespace qcs {

// Discrete-event simulation kernel.
//
// Time is virtual, held as floating-point seconds. Events fire in
// nondecreasing time order; at equal times, in insertion order (each event
// carries a unique sequence number). Activities are C++20 coroutines that
// suspend on Delay or on CapacityStore::acquire and are resumed by the event
// loop. Everything is single-threaded by contract: one SimEnv and all
// activities it owns run on one logical executor, so separate simulations
// can run in parallel threads without any shared state.

using SimTime = double;

class SimEnv;

// A simulation activity. Created suspended; SimEnv::spawn takes ownership of
// the coroutine frame and schedules the first resumption at the current time.
// A Process that is never spawned destroys its frame on scope exit.
class Process {
public:
    struct promise_type {
        SimEnv* env = nullptr;

        Process get_return_object();
        std::suspend_always initial_suspend() noexcept { return {}; }
        std::suspend_never final_suspend() noexcept { return {}; }
        void return_void() noexcept {}
        void unhandled_exception();
        ~promise_type();
    };

    Process(Process&& other) noexcept : handle_(std::exchange(other.handle_, {})) {}
    Process(const Process&) = delete;
    Process& operator=(const Process&) = delete;
    Process& operator=(Process&&) = delete;
    ~Process() {
        if (handle_) handle_.destroy();
    }

private:
    friend class SimEnv;
    explicit Process(std::coroutine_handle<promise_type> h) : handle_(h) {}

    std::coroutine_handle<promise_type> handle_;
};

// Handle to a scheduled callback; cancel() makes the firing a no-op.
class EventHandle {
public:
    EventHandle() = default;
    void cancel() {
        if (auto flag = flag_.lock()) *flag = true;
    }

private:
    friend class SimEnv;
    explicit EventHandle(std::shared_ptr<bool> flag) : flag_(std::move(flag)) {}

    std::weak_ptr<bool> flag_;
};

class SimEnv {
public:
    SimEnv() = default;
    SimEnv(const SimEnv&) = delete;
    SimEnv& operator=(const SimEnv&) = delete;
    ~SimEnv();

    SimTime now() const { return now_; }

    // Runs `action` after `delay` seconds of virtual time. delay must be >= 0.
    EventHandle schedule(SimTime delay, std::function<void()> action);

    // Starts an activity at the current time (after already-queued events).
    void spawn(Process p);

    // Processes events until the queue drains, or until the next event would
    // fire past `until`. Returns the final clock value; with `until` set and
    // events remaining, the clock is advanced to `until` exactly.
    SimTime run(std::optional<SimTime> until = std::nullopt);

    std::size_t pending_events() const { return events_.size(); }

private:
    friend struct Process::promise_type;
    friend struct Delay;
    friend class CapacityStore;

    struct Event {
        SimTime time = 0;
        std::uint64_t seq = 0;
        std::coroutine_handle<> co{};
        std::function<void()> fn{};
        std::shared_ptr<bool> cancelled{};
    };
    struct FiresLater {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    void schedule_resume(SimTime delay, std::coroutine_handle<> co);
    void set_failure(std::exception_ptr e) { failure_ = std::move(e); }
    void forget(void* frame) { live_frames_.erase(frame); }

    SimTime now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, FiresLater> events_;
    std::unordered_set<void*> live_frames_;
    std::exception_ptr failure_;
};

inline Process Process::promise_type::get_return_object() {
    return Process{std::coroutine_handle<promise_type>::from_promise(*this)};
}

// co_await Delay{env, dt}: suspends for dt seconds. A zero delay still yields
// to events already queued at the current time.
struct Delay {
    Delay(SimEnv& environment, SimTime duration);

    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> co) const { env.schedule_resume(dt, co); }
    void await_resume() const noexcept {}

    SimEnv& env;
    SimTime dt;
};

// A counted resource pool (the free qubits of one device). acquire() blocks
// the calling activity until the request can be granted; the wait queue is
// strictly FIFO, so a blocked large request also holds back later smaller
// ones. Grants triggered by release() fire at the current event time.
class CapacityStore {
public:
    CapacityStore(SimEnv& env, std::int64_t capacity);

    std::int64_t capacity() const { return capacity_; }
    std::int64_t level() const { return level_; }
    std::size_t waiting() const { return waiters_.size(); }

    class [[nodiscard]] Acquire {
    public:
        bool await_ready() noexcept {
            if (store_.waiters_.empty() && store_.level_ >= amount_) {
                store_.level_ -= amount_;
                return true;
            }
            return false;
        }
        void await_suspend(std::coroutine_handle<> co) {
            store_.waiters_.push_back({amount_, co});
        }
        void await_resume() const noexcept {}

    private:
        friend class CapacityStore;
        Acquire(CapacityStore& store, std::int64_t amount) : store_(store), amount_(amount) {}

        CapacityStore& store_;
        std::int64_t amount_;
    };

    // co_await store.acquire(n). Throws immediately if n < 1 or n exceeds the
    // total capacity (the request could never be satisfied).
    Acquire acquire(std::int64_t amount);

    // Returns qubits to the pool and grants eligible waiters in FIFO order.
    // Releasing more than is currently held is an accounting bug and throws.
    void release(std::int64_t amount);

private:
    struct Waiter {
        std::int64_t amount;
        std::coroutine_handle<> co;
    };

    void drain_waiters();

    SimEnv& env_;
    std::int64_t capacity_;
    std::int64_t level_;
    std::deque<Waiter> waiters_;
};

}  // namespace qcs
