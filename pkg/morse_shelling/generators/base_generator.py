"""
示例生成器基类
"""
import logging
from abc import ABC, abstractmethod
from typing import Optional, Tuple

from ..config import EXAMPLE_NAMES
from ..tiling import MorseTiling, ShellingOrder, require_valid

logger = logging.getLogger(__name__)


class BaseGenerator(ABC):
    """生成器基类：子类实现 generate，调用实例时自动校验输出"""

    def __init__(self, name):
        self.name = name
        self.display_name = EXAMPLE_NAMES.get(name, name)

    @abstractmethod
    def generate(self, **params) -> Tuple[MorseTiling, Optional[ShellingOrder]]:
        """
        生成示例铺砌的抽象方法

        Args:
            **params: 生成器参数（如 n）

        Returns:
            tuple: (MorseTiling, 已知的壳化顺序或 None)
        """
        pass

    def __call__(self, **params) -> Tuple[MorseTiling, Optional[ShellingOrder]]:
        """使实例可调用"""
        tiling, order = self.generate(**params)
        require_valid(tiling)
        logger.info("✅ %s: %d 个瓦片", self.display_name, len(tiling.tiles))
        return tiling, order
