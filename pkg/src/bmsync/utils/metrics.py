import time
from collections import defaultdict
from typing import Any, Dict, List


class MetricsCollector:
    """指标收集器：试验各阶段耗时与结果计数"""

    def __init__(self):
        self.metrics: Dict[str, List[float]] = defaultdict(list)
        self.start_time = time.time()

    def record_stage(self, stage: str, latency_ms: float, success: bool = True):
        """记录阶段耗时"""
        self.metrics[f"{stage}_latency"].append(latency_ms)
        if not success:
            self.metrics["errors"].append(1)

    def record_trial(self, recovered: bool, certified: bool):
        """记录试验结果"""
        self.metrics["trials"].append(1)
        if recovered:
            self.metrics["recovered"].append(1)
        if certified:
            self.metrics["certified"].append(1)

    def get_stats(self) -> Dict[str, Any]:
        """获取统计信息"""
        stats: Dict[str, Any] = {}

        for key, values in self.metrics.items():
            if not values:
                continue
            if key.endswith("_latency"):
                ordered = sorted(values)
                stats[f"{key}_avg"] = sum(values) / len(values)
                stats[f"{key}_p95"] = ordered[min(len(ordered) - 1, int(len(ordered) * 0.95))]
            elif key == "errors":
                stats["error_count"] = len(values)

        trials = len(self.metrics.get("trials", []))
        if trials:
            stats["trial_count"] = trials
            stats["recovery_rate"] = len(self.metrics.get("recovered", [])) / trials
            stats["certified_rate"] = len(self.metrics.get("certified", [])) / trials

        stats["uptime"] = time.time() - self.start_time
        return stats
