"""Time-frequency grid, channel-cost models, and the reservation ledger.

The operator reserves blocks on a T-slot by C-channel grid where primary
users occupy blocks at random. The per-slot channel cost is a nonincreasing
function of the number of free channels; its time average is the cost figure
the contract solver consumes. The ledger books blocks for applications and
frees them again on release.

Slots are numbered 1..T (matching how transmission periods are counted);
channels are numbered from 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np


class LedgerError(Exception):
    """Base class for reservation-ledger failures."""


class CapacityExceeded(LedgerError):
    """No free, unoccupied channel is left at the requested slot."""


class UnknownBooking(LedgerError):
    """The booking id does not exist."""


class AlreadyReleased(LedgerError):
    """The booking was released before."""


@dataclass(frozen=True, eq=False)
class TFGrid:
    """Immutable occupancy map: True marks a block held by a primary user."""

    slots: int
    channels: int
    occupancy: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        if self.slots < 1 or self.channels < 1:
            raise ValueError(
                f"grid needs at least one slot and one channel, got "
                f"{self.slots}x{self.channels}"
            )
        occ = np.asarray(self.occupancy, dtype=bool)
        if occ.shape != (self.slots, self.channels):
            raise ValueError(
                f"occupancy shape {occ.shape} does not match "
                f"{(self.slots, self.channels)}"
            )
        occ = occ.copy()
        occ.flags.writeable = False
        object.__setattr__(self, "occupancy", occ)

    def occupied_at(self, slot: int, channel: int) -> bool:
        self._check_slot(slot)
        return bool(self.occupancy[slot - 1, channel])

    def free_channels(self, slot: int) -> int:
        """Number of channels not held by a primary user at a slot (n_t)."""
        self._check_slot(slot)
        return int(self.channels - self.occupancy[slot - 1].sum())

    @property
    def free_per_slot(self) -> np.ndarray:
        return self.channels - self.occupancy.sum(axis=1)

    def _check_slot(self, slot: int) -> None:
        if not 1 <= slot <= self.slots:
            raise ValueError(f"slot must lie in [1, {self.slots}], got {slot}")


def generate_grid(slots: int, channels: int, occupancy_prob: float, seed: int) -> TFGrid:
    """Draw i.i.d. Bernoulli(occupancy_prob) occupancy, deterministic per seed."""
    if slots < 1 or channels < 1:
        raise ValueError(f"grid needs positive dimensions, got {slots}x{channels}")
    if not 0.0 <= occupancy_prob <= 1.0:
        raise ValueError(f"occupancy_prob must lie in [0, 1], got {occupancy_prob}")
    rng = np.random.default_rng(seed)
    occupancy = rng.random((slots, channels)) < occupancy_prob
    return TFGrid(slots=slots, channels=channels, occupancy=occupancy, seed=seed)


class CostKind(enum.Enum):
    CONSTANT = "constant"
    INVERSE = "inverse"
    LINEAR = "linear"


@dataclass(frozen=True)
class ChannelCostModel:
    """Per-channel cost as a function of how many channels are free.

    constant: a. inverse: a/n. linear: max(0, a - b*n). All kinds are
    nonincreasing in n; the cost with zero free channels is the configured
    maximum ``zero_channel_cost`` (defaults to a).
    """

    kind: CostKind
    a: float
    b: float = 0.0
    zero_channel_cost: float | None = None

    def __post_init__(self) -> None:
        if self.a < 0.0 or self.b < 0.0:
            raise ValueError(f"coefficients must be nonnegative, got a={self.a}, b={self.b}")
        if self.zero_channel_cost is None:
            object.__setattr__(self, "zero_channel_cost", self.a)
        cost_at_one = self._cost_with_channels_free(1)
        if self.zero_channel_cost < cost_at_one:
            raise ValueError(
                f"zero_channel_cost={self.zero_channel_cost} would make the cost "
                f"increase with scarcity (cost at one free channel is {cost_at_one})"
            )

    def _cost_with_channels_free(self, n: int) -> float:
        if self.kind is CostKind.CONSTANT:
            return self.a
        if self.kind is CostKind.INVERSE:
            return self.a / n
        return max(0.0, self.a - self.b * n)


def channel_cost(n_free: int, model: ChannelCostModel) -> float:
    """Cost of obtaining one channel when n_free channels are available."""
    if n_free < 0:
        raise ValueError(f"channel count must be nonnegative, got {n_free}")
    if n_free == 0:
        return float(model.zero_channel_cost)  # type: ignore[arg-type]
    return model._cost_with_channels_free(n_free)


def time_average_cost(grid: TFGrid, model: ChannelCostModel) -> float:
    """Arithmetic mean of the per-slot channel cost; feeds MarketParams.kappa."""
    total = 0.0
    for n_free in grid.free_per_slot:
        total += channel_cost(int(n_free), model)
    return total / grid.slots


@dataclass(frozen=True)
class DemandModel:
    """Transmission cadence and population of each application type.

    A type is active at slot t when t is a multiple of its period, so period 1
    means active every slot.
    """

    mc_count: int
    nonmc_count: int
    mc_period: int = 1
    nonmc_period: int = 10

    def __post_init__(self) -> None:
        if self.mc_period < 1 or self.nonmc_period < 1:
            raise ValueError(
                f"periods must be at least 1, got {self.mc_period} and {self.nonmc_period}"
            )
        if self.mc_count < 0 or self.nonmc_count < 0:
            raise ValueError(
                f"counts must be nonnegative, got {self.mc_count} and {self.nonmc_count}"
            )


class SlotProportion(NamedTuple):
    mc_share: float
    any_active: bool


def per_slot_proportions(demand: DemandModel, t: int) -> SlotProportion:
    """Share of active applications at slot t that are MC.

    When neither type is active the share is 0.0 with any_active False rather
    than an error.
    """
    if t < 1:
        raise ValueError(f"slot index must be at least 1, got {t}")
    active_mc = demand.mc_count if t % demand.mc_period == 0 else 0
    active_nonmc = demand.nonmc_count if t % demand.nonmc_period == 0 else 0
    total = active_mc + active_nonmc
    if total == 0:
        return SlotProportion(0.0, False)
    return SlotProportion(active_mc / total, True)


class BookingState(enum.Enum):
    HELD = "held"
    RELEASED = "released"


@dataclass(frozen=True)
class Booking:
    booking_id: int
    slot: int
    channel: int
    app: str
    state: BookingState


class SlotCounts(NamedTuple):
    held: int
    free: int
    occupied: int


class ReservationLedger:
    """Block bookings over a grid; single writer, lowest-free-channel policy."""

    def __init__(self) -> None:
        self._bookings: dict[int, Booking] = {}
        self._next_id = 0

    @property
    def bookings(self) -> tuple[Booking, ...]:
        return tuple(self._bookings[i] for i in sorted(self._bookings))

    def booking(self, booking_id: int) -> Booking:
        try:
            return self._bookings[booking_id]
        except KeyError:
            raise UnknownBooking(f"no booking with id {booking_id}") from None

    def held_channels(self, slot: int) -> set[int]:
        return {
            b.channel
            for b in self._bookings.values()
            if b.slot == slot and b.state is BookingState.HELD
        }

    def reserve_block(self, grid: TFGrid, slot: int, app: str = "") -> int:
        """Book the lowest-index free, unoccupied channel at a slot.

        Raises CapacityExceeded when every channel at the slot is either
        primary-occupied or already booked. The app tag must not contain
        commas or newlines (it is stored in a comma-separated record).
        """
        grid._check_slot(slot)
        if "," in app or "\n" in app:
            raise ValueError(f"app tag must not contain commas or newlines: {app!r}")
        taken = self.held_channels(slot)
        for channel in range(grid.channels):
            if channel in taken or grid.occupancy[slot - 1, channel]:
                continue
            booking_id = self._next_id
            self._next_id += 1
            self._bookings[booking_id] = Booking(
                booking_id=booking_id,
                slot=slot,
                channel=channel,
                app=app,
                state=BookingState.HELD,
            )
            return booking_id
        raise CapacityExceeded(f"no free unoccupied channel at slot {slot}")

    def release_block(self, booking_id: int) -> None:
        """Mark a held booking released, freeing its block for rebooking."""
        booking = self.booking(booking_id)
        if booking.state is BookingState.RELEASED:
            raise AlreadyReleased(f"booking {booking_id} was already released")
        self._bookings[booking_id] = replace(booking, state=BookingState.RELEASED)

    def slot_counts(self, grid: TFGrid, slot: int) -> SlotCounts:
        """Held/free/primary-occupied split of a slot's channels; sums to C."""
        occupied = grid.channels - grid.free_channels(slot)
        held = len(self.held_channels(slot))
        return SlotCounts(held=held, free=grid.channels - occupied - held, occupied=occupied)


def grid_to_text(grid: TFGrid) -> str:
    """Serialize: header line "T C seed", then one 0/1 row per slot."""
    lines = [f"{grid.slots} {grid.channels} {grid.seed}"]
    for row in grid.occupancy:
        lines.append("".join("1" if cell else "0" for cell in row))
    return "\n".join(lines) + "\n"


def grid_from_text(text: str) -> TFGrid:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty grid file")
    header = lines[0].split()
    if len(header) != 3:
        raise ValueError(f"grid header must be 'T C seed', got {lines[0]!r}")
    slots, channels, seed = int(header[0]), int(header[1]), int(header[2])
    rows = lines[1:]
    if len(rows) != slots:
        raise ValueError(f"expected {slots} occupancy rows, got {len(rows)}")
    occupancy = np.empty((slots, channels), dtype=bool)
    for t, row in enumerate(rows):
        if len(row) != channels or set(row) - {"0", "1"}:
            raise ValueError(f"occupancy row {t + 1} must be {channels} chars of 0/1")
        occupancy[t] = [ch == "1" for ch in row]
    return TFGrid(slots=slots, channels=channels, occupancy=occupancy, seed=seed)


def ledger_to_text(ledger: ReservationLedger) -> str:
    """Serialize bookings as "id,slot,channel,app,state" lines."""
    lines = [
        f"{b.booking_id},{b.slot},{b.channel},{b.app},{b.state.value}"
        for b in ledger.bookings
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def ledger_from_text(text: str) -> ReservationLedger:
    ledger = ReservationLedger()
    max_id = -1
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split(",")
        if len(parts) != 5:
            raise ValueError(f"booking line {lineno} must have 5 fields, got {line!r}")
        booking = Booking(
            booking_id=int(parts[0]),
            slot=int(parts[1]),
            channel=int(parts[2]),
            app=parts[3],
            state=BookingState(parts[4]),
        )
        if booking.booking_id in ledger._bookings:
            raise ValueError(f"duplicate booking id {booking.booking_id}")
        if booking.state is BookingState.HELD:
            if booking.channel in ledger.held_channels(booking.slot):
                raise ValueError(
                    f"two held bookings share slot {booking.slot} "
                    f"channel {booking.channel}"
                )
        ledger._bookings[booking.booking_id] = booking
        max_id = max(max_id, booking.booking_id)
    ledger._next_id = max_id + 1
    return ledger
