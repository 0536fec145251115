package order.controller;

import edu.fudan.common.util.Response;
import order.entity.Order;
import order.service.OrderService;
import org.springframework.beans.factory.annotation.Autowired;
import org.springframework.http.HttpEntity;
import org.springframework.http.HttpHeaders;
import org.springframework.http.ResponseEntity;
import org.springframework.web.bind.annotation.*;

import static org.springframework.http.ResponseEntity.ok;

/**
 * @author fdse
 */
@RestController
@RequestMapping("/api/v1/orderservice")
public class OrderController {

    @Autowired
    private OrderService orderService;

    @GetMapping(path = "/welcome")
    public String home() {
        return "Welcome to [ Order Service ] !";
    }

    /***************************For Normal Use***************************/

    @PostMapping(value = "/order/refresh")
    public HttpEntity queryOrders(@RequestBody OrderInfo qi,
                                  @RequestHeader HttpHeaders headers) {
        // @PostMapping("/order/commented-out") is not an endpoint
        return ok(orderService.queryOrders(qi, headers));
    }

    @CrossOrigin(origins = "*")
    @RequestMapping(value = "/order/{orderId}", method = RequestMethod.GET)
    public HttpEntity getOrderById(@PathVariable String orderId, @RequestHeader HttpHeaders headers) {
        /* @DeleteMapping("/order/{orderId}") lived here once */
        return ok(orderService.getOrderById(orderId, headers));
    }
}
