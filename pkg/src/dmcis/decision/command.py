"""DCC warning issuance, SMS dissemination and the emergency bypass."""

import itertools
import math
from typing import Iterable, Optional

from dmcis.core.logging import get_logger
from dmcis.core.models import (
    CdcDcc,
    DispatchEvent,
    HazardClass,
    SmsDelivery,
    SmsProvider,
    WarningOrder,
)
from dmcis.decision.matching import ResponseRequest

logger = get_logger("decision")

INTERNET = "internet"


def sms_channel(provider_index: int) -> str:
    return f"sms:{provider_index}"


def disseminate_sms(
    order: WarningOrder,
    providers: Iterable[tuple[int, SmsProvider]],
) -> list[SmsDelivery]:
    """Per-provider first and last delivery times of a warning.

    A provider sends ``batch_size`` messages every ``per_message_latency``
    seconds, so its last delivery comes latency x ceil(subscribers /
    batch_size) after issue. Providers run independently.
    """
    deliveries = []
    for index, provider in providers:
        batches = math.ceil(provider.subscribers / provider.batch_size)
        first = order.issue_time + (provider.per_message_latency if batches else 0.0)
        last = order.issue_time + provider.per_message_latency * batches
        deliveries.append(SmsDelivery(
            provider_index=index,
            provider_name=provider.name,
            subscribers=provider.subscribers,
            first_delivery=first,
            last_delivery=last,
        ))
    return deliveries


def bypass_emergency(
    dispatch_id: int,
    source: str,
    hazard_class: HazardClass,
    area_id: int,
    source_batches: tuple[int, ...],
    path: tuple[str, ...],
    bypass_classes: frozenset[HazardClass],
    departments: tuple[str, ...] = ("police", "fire", "medical"),
    truth: tuple[int, ...] = (),
) -> Optional[DispatchEvent]:
    """Call the emergency departments straight from a MAP or DPC.

    Returns None for hazard classes outside the bypass set.
    """
    if hazard_class not in bypass_classes:
        return None
    kind = source.split(":", 1)[0]
    if kind not in ("map", "dpc"):
        raise ValueError(f"Bypass source must be a MAP or DPC, got {source}")
    return DispatchEvent(
        dispatch_id=dispatch_id,
        source=source,
        hazard_class=hazard_class,
        area_id=area_id,
        departments=departments,
        bypass=True,
        source_batches=source_batches,
        path=path,
        truth=truth,
    )


class CommandCenter:
    """Decision and Command Center.

    Acts on every CDC request: issues a WarningOrder to the area's SMS
    providers and the internet channel, and dispatches the emergency
    departments.
    """

    def __init__(self, config: CdcDcc, internet_latency: float = 0.0) -> None:
        self.config = config
        self.internet_latency = internet_latency
        self._order_ids = itertools.count(1)
        self._dispatch_ids = itertools.count(1)
        self.orders: list[WarningOrder] = []

    def providers_for(self, area_id: int) -> list[tuple[int, SmsProvider]]:
        return [
            (index, provider)
            for index, provider in enumerate(self.config.sms_providers)
            if provider.serves(area_id)
        ]

    def next_dispatch_id(self) -> int:
        return next(self._dispatch_ids)

    def issue_warning(
        self,
        request: ResponseRequest,
        now: float,
    ) -> tuple[WarningOrder, DispatchEvent]:
        report = request.report
        providers = self.providers_for(report.area_id)
        if not providers:
            logger.warning(
                f"DCC: area {report.area_id} has no SMS provider; warning goes out by internet only"
            )
        path = request.path + ("dcc",)
        order = WarningOrder(
            order_id=next(self._order_ids),
            hazard_class=report.hazard_class,
            area_id=report.area_id,
            severity=report.severity_estimate,
            issue_time=now,
            channels=tuple(sms_channel(i) for i, _ in providers) + (INTERNET,),
            bypass=False,
            source_report=report.report_id,
            source_batches=report.source_batches,
            path=path,
            truth=report.truth,
        )
        dispatch = DispatchEvent(
            dispatch_id=self.next_dispatch_id(),
            source="dcc",
            hazard_class=report.hazard_class,
            area_id=report.area_id,
            departments=self.config.departments,
            bypass=False,
            source_batches=report.source_batches,
            path=path,
            truth=report.truth,
        )
        self.orders.append(order)
        logger.info(
            f"DCC: warning {order.order_id} ({order.hazard_class.value}, area {order.area_id}) "
            f"over {len(order.channels)} channel(s)"
        )
        return order, dispatch

    def internet_delivery(self, order: WarningOrder) -> float:
        return order.issue_time + self.internet_latency
