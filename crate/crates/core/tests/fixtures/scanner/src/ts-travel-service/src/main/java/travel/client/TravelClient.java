package travel.client;

import org.springframework.cloud.openfeign.FeignClient;
import org.springframework.web.bind.annotation.*;

@FeignClient(name = "ts-route-service")
public interface TravelClient {

    @GetMapping("/api/v1/routeservice/routes/{routeId}")
    String getRoute(@PathVariable("routeId") String routeId);
}
